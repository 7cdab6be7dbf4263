//! Decompositions `R = Σ c_k B_k` over Kulkarni-Nomizu products of `g`, `S`
//! and `S²`.

use nalgebra::{DMatrix, DVector};

use crate::curvature::Name;
use crate::expr::Expr;
use crate::geometry::determinant;
use crate::tensor::{Approx, Field};

use super::engine::{Engine, Env, Scal};
use super::rank::RANK_TOLERANCE;
use super::texpr::{lin, named, special, Sc, TExpr};
use super::{Status, Verdict};

pub const LABELS: [&str; 6] = ["g^g", "g^S", "S^S", "g^S2", "S^S2", "S2^S2"];

pub struct RoterResult {
    pub verdict: Verdict,
    /// `c1..cm`, zero outside the family.
    pub coefficients: Option<Vec<Scal>>,
    /// Indices of the independent basis tensors used.
    pub family: Vec<usize>,
}

fn columns(e: &Engine, basis: &[TExpr], k: usize) -> Option<(DMatrix<f64>, DVector<f64>)> {
    let b = &e.points.get(k)?.1;
    let r = b.get(Name::R).ok()?;
    let mut cols = Vec::new();
    for t in basis {
        let v = e.eval_sampled(t, &Env::none()).ok()?;
        cols.push(v[k].clone());
    }
    let rows = r.len();
    let m = DMatrix::from_fn(rows, basis.len(), |i, j| cols[j].at(i).v);
    let rhs = DVector::from_fn(rows, |i, _| r.at(i).v);
    Some((m, rhs))
}

fn numeric_rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 {
        return 0;
    }
    let mut scaled = m.clone();
    for mut c in scaled.column_iter_mut() {
        let n = c.norm();
        if n > 0.0 {
            c /= n;
        }
    }
    let s = scaled.svd(false, false).singular_values;
    let smax = s.iter().fold(0.0f64, |a, b| a.max(*b));
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|x| **x / smax > RANK_TOLERANCE).count()
}

/// Greedy maximal independent subset of columns.
fn family(m: &DMatrix<f64>) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..m.ncols() {
        let mut trial = chosen.clone();
        trial.push(j);
        let sub = m.select_columns(trial.iter());
        if numeric_rank(&sub) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// Rows giving a well-conditioned square subsystem, by partial pivoting.
fn pivot_rows(m: &DMatrix<f64>) -> Vec<usize> {
    let mut a = m.clone();
    let k = a.ncols();
    let mut used = vec![false; a.nrows()];
    let mut rows = Vec::with_capacity(k);
    for c in 0..k {
        let p = (0..a.nrows()).filter(|r| !used[*r]).max_by(|x, y| a[(*x, c)].abs().total_cmp(&a[(*y, c)].abs())).expect("enough rows");
        used[p] = true;
        rows.push(p);
        let pv = a[(p, c)];
        if pv == 0.0 {
            continue;
        }
        for r in 0..a.nrows() {
            if !used[r] {
                let f = a[(r, c)] / pv;
                for cc in c..k {
                    let sub = f * a[(p, cc)];
                    a[(r, cc)] -= sub;
                }
            }
        }
    }
    rows
}

fn residual_expr(m: usize, fam: &[usize]) -> TExpr {
    let basis = special::roter_basis();
    let mut terms = vec![(Sc::int(1), named(Name::R))];
    for &j in fam {
        terms.push((Sc::c(j + 1).neg(), basis[j].clone()));
    }
    let _ = m;
    lin(terms)
}

pub fn solve(e: &Engine, generalized: bool) -> RoterResult {
    let m = if generalized { 6 } else { 3 };
    let id = if generalized { "generalized-roter" } else { "roter" };
    let conf = e.confidence();
    let basis: Vec<TExpr> = special::roter_basis()[..m].to_vec();
    let unavailable = |s: String| RoterResult { verdict: Verdict::new(id, Status::Unavailable, conf).note(s), coefficients: None, family: vec![] };
    let Some((m0, _)) = columns(e, &basis, 0) else {
        return unavailable("basis tensors unavailable at the sample points".into());
    };
    let fam = family(&m0);
    let subset: Vec<TExpr> = fam.iter().map(|&j| basis[j].clone()).collect();
    let mut sampled: Vec<Vec<Approx>> = vec![Vec::new(); m];
    for k in 0..e.points.len() {
        let Some((mk, rk)) = columns(e, &subset, k) else {
            return unavailable("basis tensors unavailable at a sample point".into());
        };
        let sol = if fam.is_empty() {
            DVector::zeros(0)
        } else {
            match mk.clone().svd(true, true).solve(&rk, 1e-14) {
                Ok(x) => x,
                Err(s) => return unavailable(s.to_string()),
            }
        };
        for j in 0..m {
            let v = fam.iter().position(|&f| f == j).map(|p| sol[p]).unwrap_or(0.0);
            sampled[j].push(Approx::new(v));
        }
    }
    let mut env = Env::none();
    let coefficients: Vec<Scal> = if e.symbolic() {
        match exact_coefficients(e, &fam, &subset, &m0) {
            Ok(cs) => (0..m).map(|j| Scal::Sym(fam.iter().position(|&f| f == j).map(|p| cs[p].clone()).unwrap_or_else(Expr::zero))).collect(),
            Err(s) => return unavailable(s),
        }
    } else {
        sampled.into_iter().map(Scal::Num).collect()
    };
    for (j, c) in coefficients.iter().enumerate() {
        env.set(j + 1, c.clone());
    }
    let mut v = e.check_zero(id, &residual_expr(m, &fam), &env);
    if v.status == Status::Fails {
        return RoterResult { verdict: v, coefficients: None, family: fam };
    }
    let shown: Vec<String> = coefficients.iter().enumerate().map(|(j, c)| format!("c{}={}", j + 1, e.render_scal(c))).collect();
    v = v.value(shown.join(", "));
    if fam.len() < m {
        let names: Vec<&str> = fam.iter().map(|&j| LABELS[j]).collect();
        v = v.note(format!("basis degenerate; reduced family {{{}}}", names.join(",")));
    }
    RoterResult { verdict: v, coefficients: Some(coefficients), family: fam }
}

fn exact_coefficients(e: &Engine, fam: &[usize], subset: &[TExpr], m0: &DMatrix<f64>) -> Result<Vec<Expr>, String> {
    if fam.is_empty() {
        return Ok(vec![]);
    }
    let k = fam.len();
    let rows = pivot_rows(&m0.select_columns(fam.iter()));
    let r = e.eval_exact(&named(Name::R), &Env::none()).map_err(|x| x.to_string())?;
    let cols = subset.iter().map(|t| e.eval_exact(t, &Env::none())).collect::<Result<Vec<_>, _>>().map_err(|x| x.to_string())?;
    let a: Vec<Expr> = rows.iter().flat_map(|&i| cols.iter().map(move |c| c.at(i).clone())).collect();
    let b: Vec<Expr> = rows.iter().map(|&i| r.at(i).clone()).collect();
    let det = determinant(&a, k).simplify();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut aj = a.clone();
        for i in 0..k {
            aj[i * k + j] = b[i].clone();
        }
        let dj = determinant(&aj, k);
        out.push(dj.div(&det).map_err(|x| x.to_string())?.simplify().finish());
    }
    Ok(out)
}
