#![allow(dead_code)]

use nalgebra::DMatrix;

use tachibana::curvature::{approx, CurvatureSuite};
use tachibana::expr::FloatPoint;
use tachibana::fixtures::{fixture, random_chart};
use tachibana::geometry::Chart;

pub fn chart(name: &str) -> Chart {
    fixture(name).unwrap_or_else(|| panic!("no fixture {name}")).load().expect("fixture loads")
}

pub fn suite(name: &str) -> CurvatureSuite {
    CurvatureSuite::new(chart(name)).expect("suite")
}

pub fn random_suite(seed: u64, dim: usize) -> CurvatureSuite {
    CurvatureSuite::new(random_chart(seed, dim).expect("random chart")).expect("suite")
}

/// Row-major index helper for dense `n^k` arrays.
pub fn lin(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |a, &i| a * n + i)
}

pub fn all_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n.pow(k as u32))
        .map(|mut l| {
            let mut v = vec![0; k];
            for s in (0..k).rev() {
                v[s] = l % n;
                l /= n;
            }
            v
        })
        .collect()
}

/// The metric as floats at `pt` with coordinate `i` shifted by `h`.
pub fn metric_at(c: &Chart, pt: &FloatPoint, shift: &[(usize, f64)]) -> DMatrix<f64> {
    let mut p = pt.clone();
    for &(i, h) in shift {
        p.slots[c.layout.coord_slot(i)] += h;
        p.coords[i] += h;
    }
    let n = c.dim();
    DMatrix::from_fn(n, n, |i, j| approx(c.g(i, j), &p).expect("metric finite").v)
}

const H: f64 = 1e-3;

/// Five-point central difference.
fn d5<T>(f: impl Fn(f64) -> T, combine: impl Fn(&[T; 4]) -> T) -> T {
    combine(&[f(-2.0 * H), f(-H), f(H), f(2.0 * H)])
}

fn dmetric(c: &Chart, pt: &FloatPoint, base: &[(usize, f64)], k: usize) -> DMatrix<f64> {
    d5(
        |h| {
            let mut s = base.to_vec();
            s.push((k, h));
            metric_at(c, pt, &s)
        },
        |v| (&v[0] - &v[1] * 8.0 + &v[2] * 8.0 - &v[3]) / (12.0 * H),
    )
}

/// Christoffel symbols `gamma[k][i][j]` by finite differences.
pub fn christoffel_fd(c: &Chart, pt: &FloatPoint, base: &[(usize, f64)]) -> Vec<Vec<Vec<f64>>> {
    let n = c.dim();
    let g = metric_at(c, pt, base);
    let gi = g.clone().try_inverse().expect("invertible metric");
    let dg: Vec<DMatrix<f64>> = (0..n).map(|k| dmetric(c, pt, base, k)).collect();
    let mut out = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += 0.5 * gi[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                out[k][i][j] = s;
            }
        }
    }
    out
}

/// `R_{ijkl} = -g_{lm} (d_i G^m_{jk} - d_j G^m_{ik} + G^m_{ip} G^p_{jk} - G^m_{jp} G^p_{ik})`, dense row-major.
pub fn riemann_fd(c: &Chart, pt: &FloatPoint) -> Vec<f64> {
    let n = c.dim();
    let g = metric_at(c, pt, &[]);
    let gam = christoffel_fd(c, pt, &[]);
    let at = |h: f64, a: usize| christoffel_fd(c, pt, &[(a, h)]);
    let mut dgam = Vec::with_capacity(n);
    for a in 0..n {
        let v = [at(-2.0 * H, a), at(-H, a), at(H, a), at(2.0 * H, a)];
        let mut d = vec![vec![vec![0.0; n]; n]; n];
        for m in 0..n {
            for j in 0..n {
                for k in 0..n {
                    d[m][j][k] = (v[0][m][j][k] - 8.0 * v[1][m][j][k] + 8.0 * v[2][m][j][k] - v[3][m][j][k]) / (12.0 * H);
                }
            }
        }
        dgam.push(d);
    }
    let mut out = vec![0.0; n.pow(4)];
    for idx in all_indices(n, 4) {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut s = 0.0;
        for m in 0..n {
            let mut up = dgam[i][m][j][k] - dgam[j][m][i][k];
            for p in 0..n {
                up += gam[m][i][p] * gam[p][j][k] - gam[m][j][p] * gam[p][i][k];
            }
            s += g[(l, m)] * up;
        }
        out[lin(&idx, n)] = -s;
    }
    out
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}
