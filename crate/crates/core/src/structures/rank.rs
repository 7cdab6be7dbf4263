//! Sampled rank tests on the Ricci tensor.

use nalgebra::DMatrix;

use crate::curvature::{Basis, Name};
use crate::tensor::Approx;

use super::engine::Engine;
use super::Witness;

/// Relative singular value threshold.
pub const RANK_TOLERANCE: f64 = 1e-8;

pub enum RankOutcome {
    Yes,
    No(Witness),
    Unknown(String),
}

fn matrix(b: &Basis<Approx>, name: Name) -> Option<DMatrix<f64>> {
    let t = b.get(name).ok()?;
    let n = b.dim();
    Some(DMatrix::from_fn(n, n, |i, j| t.get(&[i, j]).v))
}

fn singular(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Second singular value relative to the scale, or 0 when the matrix is
/// negligible.
fn rank_one_defect(m: &DMatrix<f64>, scale: f64) -> f64 {
    let s = singular(m);
    if s[0] <= RANK_TOLERANCE * scale {
        return 0.0;
    }
    s.get(1).copied().unwrap_or(0.0) / s[0]
}

fn over_points(e: &Engine, mut defect: impl FnMut(&Basis<Approx>) -> Option<f64>) -> RankOutcome {
    if e.points.is_empty() {
        return RankOutcome::Unknown("no pole-free sample points".into());
    }
    for (idx, b) in &e.points {
        match defect(b) {
            None => return RankOutcome::Unknown("Ricci tensor unavailable at a sample point".into()),
            Some(d) if d > RANK_TOLERANCE => return RankOutcome::No(e.witness(&[], *idx, d, d)),
            Some(_) => {}
        }
    }
    RankOutcome::Yes
}

/// `rank S <= 1` at every sample point.
pub fn ricci_simple(e: &Engine) -> RankOutcome {
    over_points(e, |b| {
        let s = matrix(b, Name::S)?;
        let scale = 1.0 + s.amax();
        Some(rank_one_defect(&s, scale))
    })
}

/// `rank (S - αg) <= 1` for some `α` at every sample point. Candidates for
/// `α` are means of `n-1` clustered eigenvalues of `g^{-1}S`.
pub fn quasi_einstein(e: &Engine) -> RankOutcome {
    over_points(e, |b| {
        let s = matrix(b, Name::S)?;
        let g = matrix(b, Name::Metric)?;
        let gi = matrix(b, Name::InverseMetric)?;
        let n = s.nrows();
        let ev: Vec<(f64, f64)> = (&gi * &s).complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
        let mut best = f64::INFINITY;
        let mut candidates = vec![0.0];
        for &(re, im) in &ev {
            let mut near: Vec<(f64, f64)> = ev.clone();
            near.sort_by(|a, b| ((a.0 - re).hypot(a.1 - im)).total_cmp(&(b.0 - re).hypot(b.1 - im)));
            let k = (n - 1).max(1);
            candidates.push(near[..k].iter().map(|z| z.0).sum::<f64>() / k as f64);
        }
        for a in candidates {
            let m = &s - &g * a;
            let scale = 1.0 + s.amax() + a.abs() * g.amax();
            best = best.min(rank_one_defect(&m, scale));
        }
        Some(best)
    })
}
