//! Grading of tensor identities over the exact and the sampled backends.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::curvature::{approx, Basis, CurvatureSuite};
use crate::expr::{is_zero, Expr, SamplePlan, ZeroVerdict};
use crate::tensor::{Approx, Field, Tensor};

use super::texpr::{Ctx, EvalError, Sc, TExpr};
use super::{Confidence, Status, Verdict, Witness};

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub tolerance: f64,
    pub numeric_only: bool,
    /// Number of pole-free points for the sampled backend.
    pub points: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, tolerance: crate::expr::DEFAULT_TOLERANCE, numeric_only: false, points: 8 }
    }
}

/// A tensor value on one backend.
#[derive(Clone, Debug)]
pub enum Val {
    Sym(Arc<Tensor<Expr>>),
    Num(Vec<Arc<Tensor<Approx>>>),
}

/// A scalar field value on one backend.
#[derive(Clone, Debug)]
pub enum Scal {
    Sym(Expr),
    /// One value per numeric point.
    Num(Vec<Approx>),
}

/// Bound scalar variables.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub vars: Vec<Option<Scal>>,
}

impl Env {
    pub fn none() -> Env {
        Env::default()
    }

    pub fn with(i: usize, s: Scal) -> Env {
        let mut e = Env::default();
        e.set(i, s);
        e
    }

    pub fn set(&mut self, i: usize, s: Scal) {
        if self.vars.len() <= i {
            self.vars.resize(i + 1, None);
        }
        self.vars[i] = Some(s);
    }
}

/// Outcome of a zero test on a whole tensor.
#[derive(Clone, Debug)]
pub enum Grade {
    Zero { numeric: bool },
    Nonzero(Witness),
    Undecided(String),
}

/// Outcome of solving `lhs = λ rhs` for a scalar field `λ`.
#[derive(Clone, Debug)]
pub enum Ratio {
    Holds { l: Scal, numeric: bool, pivot: Vec<usize> },
    /// Both sides vanish identically.
    Improper { numeric: bool },
    Fails { witness: Witness, note: String },
    Undecided(String),
}

type Cache<F> = Mutex<HashMap<String, Arc<Tensor<F>>>>;

pub struct Engine<'a> {
    pub suite: &'a CurvatureSuite,
    pub plan: SamplePlan,
    pub options: Options,
    pub points: Vec<(usize, Basis<Approx>)>,
    sym_cache: Cache<Expr>,
    num_cache: Vec<Cache<Approx>>,
}

impl<'a> Engine<'a> {
    pub fn new(suite: &'a CurvatureSuite, options: Options) -> Engine<'a> {
        let plan = suite.chart().sample_plan(options.seed, options.tolerance);
        let points = suite.numeric(&plan.float, options.points);
        let num_cache = points.iter().map(|_| Mutex::new(HashMap::new())).collect();
        Engine { suite, plan, options, points, sym_cache: Mutex::new(HashMap::new()), num_cache }
    }

    pub fn symbolic(&self) -> bool {
        !self.options.numeric_only
    }

    pub fn confidence(&self) -> Confidence {
        if self.symbolic() {
            Confidence::Symbolic
        } else {
            Confidence::Numeric
        }
    }

    pub fn render(&self, e: &Expr) -> String {
        self.suite.chart().render(e)
    }

    fn point_vars(&self, env: &Env, k: usize) -> Vec<Option<Approx>> {
        let (idx, _) = &self.points[k];
        env.vars
            .iter()
            .map(|v| match v {
                None => None,
                Some(Scal::Num(xs)) => xs.get(k).copied(),
                Some(Scal::Sym(e)) => approx(e, &self.plan.float[*idx]),
            })
            .collect()
    }

    fn sym_vars(env: &Env) -> Result<Vec<Option<Expr>>, EvalError> {
        env.vars
            .iter()
            .map(|v| match v {
                None => Ok(None),
                Some(Scal::Sym(e)) => Ok(Some(e.clone())),
                Some(Scal::Num(_)) => Err(EvalError::Unbound("numeric value in exact evaluation".into())),
            })
            .collect()
    }

    pub fn eval(&self, t: &TExpr, env: &Env) -> Result<Val, EvalError> {
        if self.symbolic() {
            self.eval_exact(t, env).map(Val::Sym)
        } else {
            self.eval_sampled(t, env).map(Val::Num)
        }
    }

    pub fn eval_exact(&self, t: &TExpr, env: &Env) -> Result<Arc<Tensor<Expr>>, EvalError> {
        let vars = Self::sym_vars(env)?;
        t.eval(&Ctx { basis: &self.suite.basis, vars: &vars, cache: &self.sym_cache })
    }

    pub fn eval_sampled(&self, t: &TExpr, env: &Env) -> Result<Vec<Arc<Tensor<Approx>>>, EvalError> {
        self.points
            .iter()
            .enumerate()
            .map(|(k, (_, b))| {
                let vars = self.point_vars(env, k);
                t.eval(&Ctx { basis: b, vars: &vars, cache: &self.num_cache[k] })
            })
            .collect()
    }

    pub fn scalar(&self, s: &Sc, env: &Env) -> Result<Scal, EvalError> {
        if self.symbolic() {
            let vars = Self::sym_vars(env)?;
            let cx = Ctx { basis: &self.suite.basis, vars: &vars, cache: &self.sym_cache };
            Ok(Scal::Sym(s.eval(&cx)?))
        } else {
            self.scalar_sampled(s, env).map(Scal::Num)
        }
    }

    pub fn scalar_sampled(&self, s: &Sc, env: &Env) -> Result<Vec<Approx>, EvalError> {
        self.points
            .iter()
            .enumerate()
            .map(|(k, (_, b))| {
                let vars = self.point_vars(env, k);
                s.eval(&Ctx { basis: b, vars: &vars, cache: &self.num_cache[k] })
            })
            .collect()
    }

    pub fn witness(&self, index: &[usize], point: usize, value: f64, relative: f64) -> Witness {
        Witness { index: index.to_vec(), point, coords: self.plan.float[point].coords.clone(), value, relative }
    }

    pub fn grade(&self, v: &Val) -> Grade {
        match v {
            Val::Sym(t) => self.grade_exact(t),
            Val::Num(ts) => self.grade_sampled(ts),
        }
    }

    pub fn grade_exact(&self, t: &Tensor<Expr>) -> Grade {
        let mut numeric = false;
        let mut undecided = None;
        for (lin, e) in t.data().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            match is_zero(e, &self.plan) {
                ZeroVerdict::ZeroSymbolic => {}
                ZeroVerdict::ZeroNumeric => numeric = true,
                ZeroVerdict::Nonzero(w) => return Grade::Nonzero(self.witness(&t.index_of(lin), w.point, w.value, w.relative)),
                ZeroVerdict::Indeterminate => undecided = Some(lin),
            }
        }
        match undecided {
            Some(lin) => Grade::Undecided(format!("component {} could not be sampled away from poles", one_based(&t.index_of(lin)))),
            None => Grade::Zero { numeric },
        }
    }

    pub fn grade_sampled(&self, ts: &[Arc<Tensor<Approx>>]) -> Grade {
        if ts.is_empty() {
            return Grade::Undecided("no pole-free sample points".into());
        }
        for (k, t) in ts.iter().enumerate() {
            for (lin, a) in t.data().iter().enumerate() {
                if !a.v.is_finite() {
                    return Grade::Undecided("non-finite sample value".into());
                }
                let rel = a.relative();
                if rel >= self.options.tolerance {
                    return Grade::Nonzero(self.witness(&t.index_of(lin), self.points[k].0, a.v, rel));
                }
            }
        }
        Grade::Zero { numeric: true }
    }

    pub fn grade_scalar(&self, s: &Scal) -> Grade {
        match s {
            Scal::Sym(e) => self.grade_exact(&Tensor::scalar(e.clone())),
            Scal::Num(xs) => self.grade_sampled(&xs.iter().map(|x| Arc::new(Tensor::scalar(*x))).collect::<Vec<_>>()),
        }
    }

    pub fn render_scal(&self, s: &Scal) -> String {
        match s {
            Scal::Sym(e) => self.render(e),
            Scal::Num(xs) => {
                let v: Vec<String> = xs.iter().take(3).map(|x| format!("{:.6e}", x.v)).collect();
                format!("~[{}]", v.join(", "))
            }
        }
    }

    /// True when the scalar is constant on the chart.
    pub fn is_constant(&self, s: &Scal) -> bool {
        match s {
            Scal::Sym(e) => {
                if e.as_constant().is_some() {
                    return true;
                }
                let l = &self.suite.chart().layout;
                (0..l.dim()).all(|i| e.diff(i, l).map(|d| is_zero(&d, &self.plan).is_zero()).unwrap_or(false))
            }
            Scal::Num(xs) => {
                let Some(first) = xs.first() else { return true };
                xs.iter().all(|x| (x.v - first.v).abs() / (1.0 + x.m.max(first.m)) < self.options.tolerance.sqrt())
            }
        }
    }

    /// `a - b` as a scalar value.
    pub fn scal_diff(&self, a: &Scal, b: &Scal) -> Scal {
        match (a, b) {
            (Scal::Sym(x), Scal::Sym(y)) => Scal::Sym(x.sub(y).simplify()),
            _ => {
                let xa = self.to_sampled(a);
                let xb = self.to_sampled(b);
                Scal::Num(xa.iter().zip(&xb).map(|(p, q)| p.sub(q)).collect())
            }
        }
    }

    pub fn to_sampled(&self, s: &Scal) -> Vec<Approx> {
        match s {
            Scal::Num(xs) => xs.clone(),
            Scal::Sym(e) => self.points.iter().map(|(i, _)| approx(e, &self.plan.float[*i]).unwrap_or(Approx::new(f64::NAN))).collect(),
        }
    }

    pub fn ratio(&self, lhs: &Val, rhs: &Val) -> Ratio {
        match (lhs, rhs) {
            (Val::Sym(a), Val::Sym(b)) => self.ratio_exact(a, b),
            (Val::Num(a), Val::Num(b)) => self.ratio_sampled(a, b),
            _ => Ratio::Undecided("mixed backends".into()),
        }
    }

    fn ratio_exact(&self, lhs: &Tensor<Expr>, rhs: &Tensor<Expr>) -> Ratio {
        let pivot = (0..rhs.len()).find(|&i| !rhs.at(i).is_zero() && matches!(is_zero(rhs.at(i), &self.plan), ZeroVerdict::Nonzero(_)));
        let Some(p) = pivot else {
            return match self.grade_exact(rhs) {
                Grade::Undecided(s) => Ratio::Undecided(s),
                _ => match self.grade_exact(lhs) {
                    Grade::Zero { numeric } => Ratio::Improper { numeric },
                    Grade::Nonzero(witness) => Ratio::Fails { witness, note: "right side vanishes identically".into() },
                    Grade::Undecided(s) => Ratio::Undecided(s),
                },
            };
        };
        let l = match lhs.at(p).div(rhs.at(p)) {
            Ok(l) => l.simplify(),
            Err(e) => return Ratio::Undecided(e.to_string()),
        };
        let residual = Tensor::from_data(
            lhs.dim(),
            lhs.valence(),
            lhs.data().iter().zip(rhs.data()).map(|(a, b)| if b.is_zero() { a.clone() } else { a.sub(&l.mul(b)).simplify() }).collect(),
        );
        let pivot = lhs.index_of(p).to_vec();
        match self.grade_exact(&residual) {
            Grade::Zero { numeric } => Ratio::Holds { l: Scal::Sym(l), numeric, pivot },
            Grade::Nonzero(witness) => Ratio::Fails { witness, note: format!("ratio taken at {}", one_based(&pivot)) },
            Grade::Undecided(s) => Ratio::Undecided(s),
        }
    }

    fn ratio_sampled(&self, lhs: &[Arc<Tensor<Approx>>], rhs: &[Arc<Tensor<Approx>>]) -> Ratio {
        if lhs.is_empty() {
            return Ratio::Undecided("no pole-free sample points".into());
        }
        let tol = self.options.tolerance;
        let mut ls = Vec::with_capacity(lhs.len());
        let mut any_rhs = false;
        let mut pivot0 = Vec::new();
        let mut deferred = None;
        for (k, (a, b)) in lhs.iter().zip(rhs).enumerate() {
            let best = (0..b.len()).max_by(|&i, &j| b.at(i).relative().total_cmp(&b.at(j).relative()));
            let best = best.filter(|&i| b.at(i).relative() >= tol);
            let Some(p) = best else {
                ls.push(Approx::zero());
                if let Some((lin, x)) = a.data().iter().enumerate().find(|(_, x)| x.relative() >= tol) {
                    deferred.get_or_insert_with(|| (self.witness(&a.index_of(lin), self.points[k].0, x.v, x.relative()), "right side vanishes at this point".to_string()));
                }
                continue;
            };
            if !any_rhs {
                pivot0 = a.index_of(p).to_vec();
            }
            any_rhs = true;
            let l = a.at(p).div(b.at(p)).expect("pivot is nonzero");
            let l = Approx::new(l.v);
            for (lin, (x, y)) in a.data().iter().zip(b.data()).enumerate() {
                let r = x.sub(&l.mul(y));
                if r.relative() >= tol {
                    let note = format!("ratio taken at {}", one_based(&a.index_of(p)));
                    return Ratio::Fails { witness: self.witness(&a.index_of(lin), self.points[k].0, r.v, r.relative()), note };
                }
            }
            ls.push(l);
        }
        if let Some((witness, note)) = deferred {
            return Ratio::Fails { witness, note };
        }
        if !any_rhs {
            return Ratio::Improper { numeric: true };
        }
        Ratio::Holds { l: Scal::Num(ls), numeric: true, pivot: pivot0 }
    }

    /// Verdict for `t ≡ 0`.
    pub fn check_zero(&self, id: impl Into<String>, t: &TExpr, env: &Env) -> Verdict {
        let id = id.into();
        match self.eval(t, env) {
            Err(e) => Verdict::new(id, Status::Unavailable, self.confidence()).note(e.to_string()),
            Ok(v) => self.verdict_from_grade(id, self.grade(&v)),
        }
    }

    pub fn verdict_from_grade(&self, id: String, g: Grade) -> Verdict {
        match g {
            Grade::Zero { numeric } => Verdict::holds(id, numeric || !self.symbolic()),
            Grade::Nonzero(w) => Verdict::new(id, Status::Fails, self.confidence()).witness(w),
            Grade::Undecided(s) => Verdict::new(id, Status::Unavailable, self.confidence()).note(s),
        }
    }

    /// Verdict for `lhs = λ rhs` with `λ` extracted.
    pub fn check_ratio(&self, id: impl Into<String>, lhs: &TExpr, rhs: &TExpr, env: &Env) -> Verdict {
        let id = id.into();
        let vals = self.eval(lhs, env).and_then(|a| Ok((a, self.eval(rhs, env)?)));
        let (a, b) = match vals {
            Err(e) => return Verdict::new(id, Status::Unavailable, self.confidence()).note(e.to_string()),
            Ok(v) => v,
        };
        if let Some(msg) = shape_mismatch(&a, &b) {
            return Verdict::new(id, Status::Unavailable, self.confidence()).note(msg);
        }
        self.verdict_from_ratio(id, self.ratio(&a, &b))
    }

    pub fn verdict_from_ratio(&self, id: String, r: Ratio) -> Verdict {
        match r {
            Ratio::Holds { l, numeric, .. } => {
                let constant = self.is_constant(&l);
                let shown = format!("L={}{}", self.render_scal(&l), if constant { " (constant)" } else { "" });
                let mut v = Verdict::holds(id, numeric || !self.symbolic()).value(shown);
                v.scalar = Some(l);
                v
            }
            Ratio::Improper { numeric } => {
                let conf = if numeric || !self.symbolic() { Confidence::Numeric } else { Confidence::Symbolic };
                Verdict::new(id, Status::Improper, conf).note("both sides vanish identically")
            }
            Ratio::Fails { witness, note } => Verdict::new(id, Status::Fails, self.confidence()).witness(witness).note(note),
            Ratio::Undecided(s) => Verdict::new(id, Status::Unavailable, self.confidence()).note(s),
        }
    }
}

pub fn shape_mismatch(a: &Val, b: &Val) -> Option<String> {
    let (va, vb) = match (a, b) {
        (Val::Sym(x), Val::Sym(y)) => (x.valence(), y.valence()),
        (Val::Num(x), Val::Num(y)) => match (x.first(), y.first()) {
            (Some(x), Some(y)) => (x.valence(), y.valence()),
            _ => return None,
        },
        _ => return Some("mixed backends".into()),
    };
    (va != vb).then(|| format!("valence mismatch: {va} vs {vb}"))
}

pub fn one_based(idx: &[usize]) -> String {
    let v: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", v.join(","))
}
