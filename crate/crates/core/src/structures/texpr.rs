//! Tensor and scalar expressions over suite tensors, evaluated on any backend.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::curvature::{Basis, CurvatureError, Name};
use crate::expr::Coeff;
use crate::tensor::{
    contract, curvature_action, kulkarni_nomizu_general, lower, outer, tachibana, walker_sum, wedge_form, Field, Tensor, TensorError, Valence,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("scalar '{0}' is not bound")]
    Unbound(String),
}

/// Scalar fields built from the suite and bound variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Sc {
    Const(Coeff),
    Dim,
    Kappa,
    Kappa2,
    /// Bound variable: `L` at 0, Roter coefficients `c1..c6` at 1..6.
    Var(usize),
    Add(Vec<Sc>),
    Mul(Vec<Sc>),
    Inv(Box<Sc>),
}

impl Sc {
    pub fn int(n: i64) -> Sc {
        Sc::Const(Coeff::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Sc {
        Sc::Const(Coeff::ratio(n, d))
    }

    pub fn l() -> Sc {
        Sc::Var(0)
    }

    pub fn c(i: usize) -> Sc {
        Sc::Var(i)
    }

    pub fn inv(self) -> Sc {
        Sc::Inv(Box::new(self))
    }

    pub fn div(self, o: Sc) -> Sc {
        Sc::Mul(vec![self, o.inv()])
    }

    pub fn neg(self) -> Sc {
        Sc::Mul(vec![Sc::int(-1), self])
    }

    pub fn mul(self, o: Sc) -> Sc {
        Sc::Mul(vec![self, o])
    }

    pub fn add(self, o: Sc) -> Sc {
        Sc::Add(vec![self, o])
    }

    pub fn sub(self, o: Sc) -> Sc {
        Sc::Add(vec![self, o.neg()])
    }

    /// `n - k`.
    pub fn dim_minus(k: i64) -> Sc {
        Sc::Add(vec![Sc::Dim, Sc::int(-k)])
    }

    pub fn uses_vars(&self) -> bool {
        match self {
            Sc::Var(_) => true,
            Sc::Add(v) | Sc::Mul(v) => v.iter().any(Sc::uses_vars),
            Sc::Inv(a) => a.uses_vars(),
            _ => false,
        }
    }

    pub fn eval<F: Field>(&self, cx: &Ctx<F>) -> Result<F, EvalError> {
        Ok(match self {
            Sc::Const(c) => F::constant(c),
            Sc::Dim => F::constant(&Coeff::int(cx.basis.dim() as i64)),
            Sc::Kappa => cx.basis.scalar(Name::Kappa)?,
            Sc::Kappa2 => cx.basis.scalar(Name::Kappa2)?,
            Sc::Var(i) => cx.vars.get(*i).cloned().flatten().ok_or_else(|| EvalError::Unbound(var_name(*i)))?,
            Sc::Add(v) => {
                let xs = v.iter().map(|s| s.eval(cx)).collect::<Result<Vec<F>, _>>()?;
                F::sum(&xs).finish()
            }
            Sc::Mul(v) => {
                let mut acc = F::one();
                for s in v {
                    acc = acc.mul(&s.eval(cx)?);
                }
                acc.finish()
            }
            Sc::Inv(a) => F::one().div(&a.eval(cx)?).ok_or_else(|| EvalError::Unbound(format!("1/({a}) at a zero")))?.finish(),
        })
    }
}

pub fn var_name(i: usize) -> String {
    if i == 0 {
        "L".to_string()
    } else {
        format!("c{i}")
    }
}

impl fmt::Display for Sc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sc::Const(c) => {
                if c.is_integer() && !c.is_negative() {
                    write!(f, "{c}")
                } else {
                    write!(f, "({c})")
                }
            }
            Sc::Dim => f.write_str("n"),
            Sc::Kappa => f.write_str("kappa"),
            Sc::Kappa2 => f.write_str("kappa2"),
            Sc::Var(i) => f.write_str(&var_name(*i)),
            Sc::Add(v) => {
                f.write_str("(")?;
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(")")
            }
            Sc::Mul(v) => {
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
            Sc::Inv(a) => write!(f, "1/{a}"),
        }
    }
}

/// Tensor expressions. Operator pairs are appended as trailing slots.
#[derive(Clone, Debug, PartialEq)]
pub enum TExpr {
    Named(Name),
    /// `D·H`
    Act(Box<TExpr>, Box<TExpr>),
    /// `Q(A,H)`
    Q(Box<TExpr>, Box<TExpr>),
    /// `A∧H`
    Kn(Box<TExpr>, Box<TExpr>),
    /// `(X ∧_H Y)(X1, ...)` with slots `(X, Y, X1, ...)`.
    WedgeForm(Box<TExpr>),
    Outer(Box<TExpr>, Box<TExpr>),
    Lin(Vec<(Sc, TExpr)>),
    Permute(Box<TExpr>, Vec<usize>),
    Walker(Box<TExpr>),
    /// Lower the contravariant slot into covariant position `at`.
    Lower(Box<TExpr>, usize),
    Contract(Box<TExpr>, usize, usize),
    /// Constant 1-form.
    Form(Vec<Coeff>),
}

pub fn named(n: Name) -> TExpr {
    TExpr::Named(n)
}

pub fn act(d: TExpr, h: TExpr) -> TExpr {
    TExpr::Act(Box::new(d), Box::new(h))
}

pub fn q(a: TExpr, h: TExpr) -> TExpr {
    TExpr::Q(Box::new(a), Box::new(h))
}

pub fn kn(a: TExpr, h: TExpr) -> TExpr {
    TExpr::Kn(Box::new(a), Box::new(h))
}

pub fn outer_of(a: TExpr, b: TExpr) -> TExpr {
    TExpr::Outer(Box::new(a), Box::new(b))
}

pub fn permute(t: TExpr, p: &[usize]) -> TExpr {
    TExpr::Permute(Box::new(t), p.to_vec())
}

pub fn walker(t: TExpr) -> TExpr {
    TExpr::Walker(Box::new(t))
}

pub fn lin(terms: Vec<(Sc, TExpr)>) -> TExpr {
    TExpr::Lin(terms)
}

/// `a - b`.
pub fn diff(a: TExpr, b: TExpr) -> TExpr {
    TExpr::Lin(vec![(Sc::int(1), a), (Sc::int(-1), b)])
}

/// `a - s*b`.
pub fn diff_scaled(a: TExpr, s: Sc, b: TExpr) -> TExpr {
    TExpr::Lin(vec![(Sc::int(1), a), (s.neg(), b)])
}

/// Evaluation context for one backend.
pub struct Ctx<'a, F: Field> {
    pub basis: &'a Basis<F>,
    pub vars: &'a [Option<F>],
    pub cache: &'a Mutex<HashMap<String, Arc<Tensor<F>>>>,
}

impl TExpr {
    pub fn uses_vars(&self) -> bool {
        match self {
            TExpr::Named(_) | TExpr::Form(_) => false,
            TExpr::Act(a, b) | TExpr::Q(a, b) | TExpr::Kn(a, b) | TExpr::Outer(a, b) => a.uses_vars() || b.uses_vars(),
            TExpr::WedgeForm(a) | TExpr::Permute(a, _) | TExpr::Walker(a) | TExpr::Lower(a, _) | TExpr::Contract(a, _, _) => a.uses_vars(),
            TExpr::Lin(v) => v.iter().any(|(s, t)| s.uses_vars() || t.uses_vars()),
        }
    }

    /// Names of suite tensors referenced.
    pub fn names(&self, out: &mut Vec<Name>) {
        match self {
            TExpr::Named(n) => out.push(*n),
            TExpr::Form(_) => {}
            TExpr::Act(a, b) | TExpr::Q(a, b) | TExpr::Kn(a, b) | TExpr::Outer(a, b) => {
                a.names(out);
                b.names(out);
            }
            TExpr::WedgeForm(a) | TExpr::Permute(a, _) | TExpr::Walker(a) | TExpr::Lower(a, _) | TExpr::Contract(a, _, _) => a.names(out),
            TExpr::Lin(v) => v.iter().for_each(|(_, t)| t.names(out)),
        }
    }

    pub fn eval<F: Field>(&self, cx: &Ctx<F>) -> Result<Arc<Tensor<F>>, EvalError> {
        if let TExpr::Named(n) = self {
            return Ok(cx.basis.get(*n)?);
        }
        let key = (!self.uses_vars()).then(|| self.to_string());
        if let Some(k) = &key {
            if let Some(t) = cx.cache.lock().expect("cache poisoned").get(k) {
                return Ok(t.clone());
            }
        }
        let b = cx.basis;
        let t = match self {
            TExpr::Named(_) => unreachable!(),
            TExpr::Act(d, h) => curvature_action(&*d.eval(cx)?, &*h.eval(cx)?, b.inverse())?,
            TExpr::Q(a, h) => tachibana(&*a.eval(cx)?, &*h.eval(cx)?)?,
            TExpr::Kn(a, h) => kulkarni_nomizu_general(&*a.eval(cx)?, &*h.eval(cx)?)?,
            TExpr::WedgeForm(h) => wedge_form(&*h.eval(cx)?, b.metric())?,
            TExpr::Outer(a, c) => outer(&*a.eval(cx)?, &*c.eval(cx)?)?,
            TExpr::Lin(terms) => {
                let mut parts = Vec::with_capacity(terms.len());
                for (s, t) in terms {
                    parts.push((s.eval(cx)?, t.eval(cx)?));
                }
                let refs: Vec<(F, &Tensor<F>)> = parts.iter().map(|(s, t)| (s.clone(), &**t)).collect();
                Tensor::linear(&refs)?
            }
            TExpr::Permute(t, p) => {
                let t = t.eval(cx)?;
                if p.len() != t.rank() {
                    return Err(TensorError::SlotRange { slot: p.len(), valence: t.valence() }.into());
                }
                t.permute(p)
            }
            TExpr::Walker(t) => walker_sum(&*t.eval(cx)?)?,
            TExpr::Lower(t, at) => lower(&*t.eval(cx)?, *at, b.metric())?,
            TExpr::Contract(t, i, j) => contract(&*t.eval(cx)?, *i, *j, b.inverse())?,
            TExpr::Form(c) => Tensor::from_fn(b.dim(), Valence::new(0, 1), |i| c.get(i[0]).map(F::constant).unwrap_or_else(F::zero)),
        };
        let t = Arc::new(t);
        if let Some(k) = key {
            cx.cache.lock().expect("cache poisoned").insert(k, t.clone());
        }
        Ok(t)
    }
}

fn list<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for TExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TExpr::Named(n) => write!(f, "{n}"),
            TExpr::Act(d, h) => {
                let wrap = |t: &TExpr| if matches!(t, TExpr::Named(_)) { t.to_string() } else { format!("({t})") };
                write!(f, "{}.{}", wrap(d), wrap(h))
            }
            TExpr::Q(a, h) => write!(f, "Q({a},{h})"),
            TExpr::Kn(a, h) => write!(f, "{a}^{h}"),
            TExpr::WedgeForm(h) => write!(f, "wedge({h})"),
            TExpr::Outer(a, b) => write!(f, "({a}*{b})"),
            TExpr::Lin(terms) => {
                f.write_str("[")?;
                for (i, (s, t)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{s}*{t}")?;
                }
                f.write_str("]")
            }
            TExpr::Permute(t, p) => write!(f, "perm[{}]({t})", list(p)),
            TExpr::Walker(t) => write!(f, "walker({t})"),
            TExpr::Lower(t, at) => write!(f, "lower({t},{at})"),
            TExpr::Contract(t, i, j) => write!(f, "tr{i}{j}({t})"),
            TExpr::Form(c) => write!(f, "form({})", list(c)),
        }
    }
}

/// Frequently used composite tensors.
pub mod special {
    use super::*;

    /// `RS_{abcx} = R_{abcm} calS^m_x`.
    pub fn r_s() -> TExpr {
        TExpr::Contract(Box::new(outer_of(named(Name::R), named(Name::S))), 3, 4)
    }

    /// `RS(Y,X1,X2,X) + RS(Y,X2,X1,X) - RS(X,X1,X2,Y) - RS(X,X2,X1,Y)`
    /// with slots `(X1, X2, X, Y)`.
    pub fn cond() -> TExpr {
        let rs = r_s();
        lin(vec![
            (Sc::int(1), permute(rs.clone(), &[3, 0, 1, 2])),
            (Sc::int(1), permute(rs.clone(), &[3, 1, 0, 2])),
            (Sc::int(-1), permute(rs.clone(), &[2, 0, 1, 3])),
            (Sc::int(-1), permute(rs, &[2, 1, 0, 3])),
        ])
    }

    /// `S(X,X2)S(X1,Y) - S(X,X1)S(X2,Y) + g(X2,Y)S²(X,X1) - g(X,X2)S²(X1,Y)`.
    pub fn s_s2_form() -> TExpr {
        let ss = outer_of(named(Name::S), named(Name::S));
        let gs = outer_of(named(Name::Metric), named(Name::S2));
        lin(vec![
            (Sc::int(1), permute(ss.clone(), &[2, 1, 0, 3])),
            (Sc::int(-1), permute(ss, &[2, 0, 1, 3])),
            (Sc::int(1), permute(gs.clone(), &[1, 3, 2, 0])),
            (Sc::int(-1), permute(gs, &[2, 1, 0, 3])),
        ])
    }

    /// `(∇_{X1}S)(X2,X3) - (∇_{X2}S)(X1,X3)`.
    pub fn codazzi() -> TExpr {
        diff(permute(named(Name::GradS), &[1, 2, 0]), permute(named(Name::GradS), &[0, 2, 1]))
    }

    /// `(∇_{X1}P)(X2,X3,X,Y)` summed cyclically over `X1,X2,X3`.
    pub fn cyclic_grad_p_first() -> TExpr {
        let gp = named(Name::GradP);
        lin(vec![
            (Sc::int(1), permute(gp.clone(), &[1, 2, 3, 4, 0])),
            (Sc::int(1), permute(gp.clone(), &[2, 0, 3, 4, 1])),
            (Sc::int(1), permute(gp, &[0, 1, 3, 4, 2])),
        ])
    }

    /// `(∇_{X1}P)(X,Y,X2,X3)` summed cyclically over `X1,X2,X3`.
    pub fn cyclic_grad_p_last() -> TExpr {
        let gp = named(Name::GradP);
        lin(vec![
            (Sc::int(1), permute(gp.clone(), &[3, 4, 1, 2, 0])),
            (Sc::int(1), permute(gp.clone(), &[3, 4, 2, 0, 1])),
            (Sc::int(1), permute(gp, &[3, 4, 0, 1, 2])),
        ])
    }

    /// `(S∧S)(X1,X2,X,Y) - 2 (X ∧_{S²} Y)(X1,X2)`.
    pub fn s_wedge_identity() -> TExpr {
        diff_scaled(
            kn(named(Name::S), named(Name::S)),
            Sc::int(2),
            permute(TExpr::WedgeForm(Box::new(named(Name::S2))), &[2, 3, 0, 1]),
        )
    }

    /// `n²S² - 2nκS + κ²g`.
    pub fn ricci_quadratic() -> TExpr {
        lin(vec![
            (Sc::Dim.mul(Sc::Dim), named(Name::S2)),
            (Sc::int(-2).mul(Sc::Dim).mul(Sc::Kappa), named(Name::S)),
            (Sc::Kappa.mul(Sc::Kappa), named(Name::Metric)),
        ])
    }

    /// `nS² - 2κS + κ⁽²⁾g`.
    pub fn ricci_quadratic_trace() -> TExpr {
        lin(vec![
            (Sc::Dim, named(Name::S2)),
            (Sc::int(-2).mul(Sc::Kappa), named(Name::S)),
            (Sc::Kappa2, named(Name::Metric)),
        ])
    }

    /// `nS - κg`.
    pub fn traceless_ricci_n() -> TExpr {
        lin(vec![(Sc::Dim, named(Name::S)), (Sc::Kappa.neg(), named(Name::Metric))])
    }

    /// The six Roter basis tensors, in order.
    pub fn roter_basis() -> [TExpr; 6] {
        let g = || named(Name::Metric);
        let s = || named(Name::S);
        let s2 = || named(Name::S2);
        [kn(g(), g()), kn(g(), s()), kn(s(), s()), kn(g(), s2()), kn(s(), s2()), kn(s2(), s2())]
    }
}
