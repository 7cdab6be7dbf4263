//! Venzi space of a (0,4)-tensor: 1-forms `Π` with
//! `Π(X1)D(X2,X3,X4,X5) + Π(X2)D(X3,X1,X4,X5) + Π(X3)D(X1,X2,X4,X5) = 0`.

use nalgebra::DMatrix;

use crate::curvature::Name;
use crate::expr::{Coeff, Expr};
use crate::tensor::{Field, Tensor, Valence};

use super::engine::{Engine, Env, Grade};
use super::rank::RANK_TOLERANCE;
use super::texpr::named;
use super::{Confidence, Status, Verdict};

pub struct VenziResult {
    pub verdict: Verdict,
    /// Constant 1-forms spanning the solution space.
    pub forms: Vec<Vec<Coeff>>,
    /// `g^{-1}(Π,Π) ≡ 0` per form.
    pub null: Vec<bool>,
    /// Null space dimension at each sampled point.
    pub pointwise: Vec<usize>,
}

fn system(d: &Tensor<crate::tensor::Approx>) -> DMatrix<f64> {
    let n = d.dim();
    let scale = d.data().iter().fold(0.0f64, |a, x| a.max(x.v.abs())).max(f64::MIN_POSITIVE);
    let rows = n.pow(5);
    let mut m = DMatrix::zeros(rows, n);
    for r in 0..rows {
        let idx = crate::tensor::decode(r, n, 5);
        let (i, j, k, l, q) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        m[(r, i)] += d.get(&[j, k, l, q]).v / scale;
        m[(r, j)] += d.get(&[k, i, l, q]).v / scale;
        m[(r, k)] += d.get(&[i, j, l, q]).v / scale;
    }
    m
}

/// Right singular vectors for singular values below the relative threshold.
fn null_space(m: &DMatrix<f64>) -> (Vec<Vec<f64>>, f64) {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |a, b| a.max(*b));
    let mut out = Vec::new();
    let mut smallest = f64::INFINITY;
    for (i, s) in svd.singular_values.iter().enumerate() {
        let rel = if smax > 0.0 { s / smax } else { 0.0 };
        smallest = smallest.min(rel);
        if rel <= RANK_TOLERANCE {
            out.push((0..n).map(|j| vt[(i, j)]).collect());
        }
    }
    (out, smallest)
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64) -> Option<Coeff> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..32 {
        let a = r.floor();
        if a.abs() > 1e9 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() < 1e-9 * (1.0 + x.abs()) {
            return Some(Coeff::ratio(h1, k1));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    ((x - h1 as f64 / k1 as f64).abs() < 1e-9 * (1.0 + x.abs()) && k1 != 0).then(|| Coeff::ratio(h1, k1))
}

/// Reduced row echelon form of the spanning vectors, lifted to rationals.
fn lift(vs: &[Vec<f64>]) -> Option<Vec<Vec<Coeff>>> {
    let n = vs.first()?.len();
    let mut m: Vec<Vec<f64>> = vs.to_vec();
    let mut row = 0;
    for col in 0..n {
        if row == m.len() {
            break;
        }
        let p = (row..m.len()).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[p][col].abs() < 1e-7 {
            continue;
        }
        m.swap(row, p);
        let pv = m[row][col];
        m[row].iter_mut().for_each(|x| *x /= pv);
        for r in 0..m.len() {
            if r != row {
                let f = m[r][col];
                let src = m[row].clone();
                m[r].iter_mut().zip(&src).for_each(|(x, y)| *x -= f * y);
            }
        }
        row += 1;
    }
    m.iter().map(|v| v.iter().map(|x| rationalize(*x, 64)).collect()).collect()
}

fn residual(pi: &[Coeff], d: &Tensor<Expr>) -> Tensor<Expr> {
    let p: Vec<Expr> = pi.iter().map(|c| Expr::constant(c.clone())).collect();
    Tensor::from_fn(d.dim(), Valence::new(0, 5), |x| {
        let (i, j, k, l, q) = (x[0], x[1], x[2], x[3], x[4]);
        let items = [(false, &p[i], d.get(&[j, k, l, q])), (false, &p[j], d.get(&[k, i, l, q])), (false, &p[k], d.get(&[i, j, l, q]))];
        Expr::sum_of_products(&items).finish()
    })
}

fn show(pi: &[Coeff]) -> String {
    let v: Vec<String> = pi.iter().map(|c| c.to_string()).collect();
    format!("({})", v.join(","))
}

pub fn solve(e: &Engine, d: Name) -> VenziResult {
    let id = format!("venzi({d})");
    let conf = e.confidence();
    let fail = |v: Verdict| VenziResult { verdict: v, forms: vec![], null: vec![], pointwise: vec![] };
    let t = named(d);
    match e.eval(&t, &Env::none()).map(|v| e.grade(&v)) {
        Err(err) => return fail(Verdict::new(id, Status::Unavailable, conf).note(err.to_string())),
        Ok(Grade::Zero { numeric }) => {
            return fail(Verdict::new(id, Status::Improper, if numeric { Confidence::Numeric } else { conf }).note(format!("{d} vanishes identically")))
        }
        Ok(Grade::Undecided(s)) => return fail(Verdict::new(id, Status::Unavailable, conf).note(s)),
        Ok(Grade::Nonzero(_)) => {}
    }
    let samples = match e.eval_sampled(&t, &Env::none()) {
        Ok(s) => s,
        Err(err) => return fail(Verdict::new(id, Status::Unavailable, conf).note(err.to_string())),
    };
    let mut pointwise = Vec::new();
    let mut rigid = None;
    let mut blocks = Vec::new();
    for ((idx, _), s) in e.points.iter().zip(&samples) {
        let m = system(s);
        let (ns, smallest) = null_space(&m);
        if ns.is_empty() && rigid.is_none() {
            rigid = Some((*idx, smallest));
        }
        pointwise.push(ns.len());
        blocks.push(m);
    }
    if let Some((idx, smallest)) = rigid {
        let w = e.witness(&[], idx, smallest, smallest);
        return VenziResult { verdict: Verdict::new(id, Status::Fails, Confidence::Numeric).witness(w).note("no nonzero solution at this point"), forms: vec![], null: vec![], pointwise };
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let n = e.suite.dim();
    let mut stacked = DMatrix::zeros(rows, n);
    let mut r0 = 0;
    for b in &blocks {
        stacked.view_mut((r0, 0), (b.nrows(), n)).copy_from(b);
        r0 += b.nrows();
    }
    let (common, _) = null_space(&stacked);
    let note_pw = format!("pointwise dimension {:?}", pointwise);
    let Some(forms) = (!common.is_empty()).then(|| lift(&common)).flatten() else {
        let v = Verdict::new(id, Status::HoldsNumeric, Confidence::Numeric).note(format!("{note_pw}; no constant rational solution"));
        return VenziResult { verdict: v, forms: vec![], null: vec![], pointwise };
    };
    let mut symbolic = e.symbolic();
    if symbolic {
        let dt = match e.eval_exact(&t, &Env::none()) {
            Ok(x) => x,
            Err(err) => return fail(Verdict::new(id, Status::Unavailable, conf).note(err.to_string())),
        };
        for f in &forms {
            match e.grade_exact(&residual(f, &dt)) {
                Grade::Zero { numeric } => symbolic &= !numeric,
                Grade::Nonzero(w) => {
                    let v = Verdict::new(id, Status::Fails, conf).witness(w).note(format!("lifted form {} is not a solution", show(f)));
                    return VenziResult { verdict: v, forms: vec![], null: vec![], pointwise };
                }
                Grade::Undecided(s) => return fail(Verdict::new(id, Status::Unavailable, conf).note(s)),
            }
        }
    }
    let null: Vec<bool> = forms.iter().map(|f| is_null(e, f)).collect();
    let shown: Vec<String> = forms.iter().zip(&null).map(|(f, z)| format!("Pi={} {}", show(f), if *z { "null" } else { "non-null" })).collect();
    let v = Verdict::holds(id, !symbolic).value(shown.join("; ")).note(note_pw);
    VenziResult { verdict: v, forms, null, pointwise }
}

fn is_null(e: &Engine, pi: &[Coeff]) -> bool {
    let n = pi.len();
    let p: Vec<Expr> = pi.iter().map(|c| Expr::constant(c.clone())).collect();
    if e.symbolic() {
        let gi = e.suite.basis.inverse();
        let mut items = Vec::new();
        for i in 0..n {
            for j in 0..n {
                items.push(p[i].mul(&p[j]).mul(gi.get(&[i, j])));
            }
        }
        let s = Expr::sum(items.iter());
        matches!(e.grade_exact(&Tensor::scalar(s)), Grade::Zero { .. })
    } else {
        e.points.iter().all(|(_, b)| {
            let gi = b.inverse();
            let mut acc = crate::tensor::Approx::zero();
            for i in 0..n {
                for j in 0..n {
                    acc = acc.add(&gi.get(&[i, j]).scale(&pi[i].mul(&pi[j])));
                }
            }
            acc.relative() < e.options.tolerance
        })
    }
}
