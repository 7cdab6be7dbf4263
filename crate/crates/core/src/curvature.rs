//! Levi-Civita connection, curvature and the derived tensor family.
//!
//! Conventions: `calR^m_{abc}` is the curvature endomorphism `calR(∂a,∂b)∂c`
//! multiplied by [`SIGMA`], `R_{abcd} = g_{dm} calR^m_{abc}`,
//! `S_{bc} = g^{ad} R_{abcd}` and `κ = g^{bc} S_{bc}`. With `SIGMA = -1` a round
//! sphere has `R = κ/(n(n-1)) G` and `G_{1212} = -1` for the Euclidean metric.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;
use thiserror::Error;

use crate::expr::{Coeff, Expr, ExprError, FloatPoint, Layout};
use crate::geometry::{Chart, ChartError};
use crate::tensor::{
    contract, gct_residuals, kulkarni_nomizu_general, lower, raise, squared, wedge_form, Approx, Field, Tensor, TensorError, Valence,
};

/// Global curvature sign.
pub const SIGMA: i64 = -1;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("evaluation point is a pole")]
    Pole,
}

/// Tensors a [`Basis`] can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Name {
    Metric,
    InverseMetric,
    Gamma,
    R,
    CalR,
    S,
    CalS,
    S2,
    Kappa,
    Kappa2,
    E,
    Z,
    G,
    C,
    W,
    K,
    P,
    CalG,
    CalC,
    CalW,
    CalK,
    CalP,
    /// `S(X2,X3)g(X1,X4) - S(X1,X3)g(X2,X4)`, so that `P = R - wedgeS/(n-1)`.
    WedgeS,
    GradR,
    GradS,
    GradP,
    GradKappa,
}

impl Name {
    pub const ALL: [Name; 27] = [
        Name::Metric,
        Name::InverseMetric,
        Name::Gamma,
        Name::R,
        Name::CalR,
        Name::S,
        Name::CalS,
        Name::S2,
        Name::Kappa,
        Name::Kappa2,
        Name::E,
        Name::Z,
        Name::G,
        Name::C,
        Name::W,
        Name::K,
        Name::P,
        Name::CalG,
        Name::CalC,
        Name::CalW,
        Name::CalK,
        Name::CalP,
        Name::WedgeS,
        Name::GradR,
        Name::GradS,
        Name::GradP,
        Name::GradKappa,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Name::Metric => "g",
            Name::InverseMetric => "ginv",
            Name::Gamma => "Gamma",
            Name::R => "R",
            Name::CalR => "calR",
            Name::S => "S",
            Name::CalS => "calS",
            Name::S2 => "S2",
            Name::Kappa => "kappa",
            Name::Kappa2 => "kappa2",
            Name::E => "E",
            Name::Z => "Z",
            Name::G => "G",
            Name::C => "C",
            Name::W => "W",
            Name::K => "K",
            Name::P => "P",
            Name::CalG => "calG",
            Name::CalC => "calC",
            Name::CalW => "calW",
            Name::CalK => "calK",
            Name::CalP => "calP",
            Name::WedgeS => "wedgeS",
            Name::GradR => "gradR",
            Name::GradS => "gradS",
            Name::GradP => "gradP",
            Name::GradKappa => "gradkappa",
        }
    }

    /// The `(1,k-1)` form of a `(0,k)` name, when one exists.
    pub fn raised(&self) -> Option<Name> {
        Some(match self {
            Name::R => Name::CalR,
            Name::S => Name::CalS,
            Name::G => Name::CalG,
            Name::C => Name::CalC,
            Name::W => Name::CalW,
            Name::K => Name::CalK,
            Name::P => Name::CalP,
            _ => return None,
        })
    }

    /// The `(0,k)` form of a `(1,k-1)` name.
    pub fn lowered(&self) -> Option<Name> {
        Name::ALL.iter().copied().find(|n| n.raised() == Some(*self))
    }

    /// Needs third derivatives of the metric.
    pub fn needs_gradient(&self) -> bool {
        matches!(self, Name::GradR | Name::GradS | Name::GradP | Name::GradKappa)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Name {
    type Err = String;

    fn from_str(s: &str) -> Result<Name, String> {
        Name::ALL.iter().copied().find(|n| n.as_str() == s).ok_or_else(|| format!("unknown tensor '{s}'"))
    }
}

/// Derivative tensor of a symbolic tensor, new slot appended last.
pub fn partials(t: &Tensor<Expr>, l: &Layout) -> Result<Tensor<Expr>, ExprError> {
    let n = t.dim();
    let v = t.valence();
    let mut data = Vec::with_capacity(t.len() * n);
    for x in t.data() {
        for i in 0..n {
            data.push(if x.is_zero() { Expr::zero() } else { x.diff(i, l)? });
        }
    }
    Ok(Tensor::from_data(n, Valence::new(v.contra, v.co + 1), data))
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij})`.
pub fn christoffel(g: &Tensor<Expr>, ginv: &Tensor<Expr>, l: &Layout) -> Result<Tensor<Expr>, ExprError> {
    let n = g.dim();
    let dg = partials(g, l)?;
    let half = Coeff::ratio(1, 2);
    let first = Tensor::from_fn(n, Valence::new(0, 3), |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        Expr::sum([dg.get(&[b, c, a]), dg.get(&[a, c, b]), &dg.get(&[a, b, c]).neg()]).scale(&half)
    });
    Ok(Tensor::from_fn(n, Valence::new(1, 2), |i| {
        let (k, a, b) = (i[0], i[1], i[2]);
        let items: Vec<(bool, &Expr, &Expr)> = (0..n).map(|c| (false, ginv.get(&[k, c]), first.get(&[a, b, c]))).collect();
        Expr::sum_of_products(&items).simplify()
    }))
}

/// `∇T` for a symbolic `(0,k)` tensor, derivative slot appended last.
pub fn covariant_derivative(t: &Tensor<Expr>, gamma: &Tensor<Expr>, l: &Layout) -> Result<Tensor<Expr>, CurvatureError> {
    let v = t.valence();
    if v.contra != 0 {
        return Err(TensorError::ValenceMismatch { expected: Valence::new(0, v.co), found: v }.into());
    }
    let n = t.dim();
    let d = partials(t, l)?;
    let k = v.co;
    let mut src: SmallVec<[usize; 8]> = SmallVec::from_elem(0, k);
    Ok(Tensor::from_fn(n, Valence::new(0, k + 1), |idx| {
        let e = idx[k];
        let mut neg: Vec<(bool, &Expr, &Expr)> = Vec::new();
        for s in 0..k {
            src.copy_from_slice(&idx[..k]);
            for m in 0..n {
                let gm = gamma.get(&[m, e, idx[s]]);
                if gm.is_zero() {
                    continue;
                }
                src[s] = m;
                let x = t.get(&src);
                if !x.is_zero() {
                    neg.push((true, gm, x));
                }
            }
        }
        let one = Expr::one();
        neg.push((false, &one, d.get(idx)));
        Expr::sum_of_products(&neg).simplify()
    }))
}

/// Symbolic connection data of a chart.
pub struct Connection {
    pub chart: Arc<Chart>,
    pub g: Tensor<Expr>,
    pub ginv: Tensor<Expr>,
    pub gamma: Tensor<Expr>,
    /// `∂_e Γ^m_{bc}` stored as `[m, b, c, e]`.
    pub dgamma: Tensor<Expr>,
    ddgamma: OnceLock<Result<Tensor<Expr>, CurvatureError>>,
}

impl Connection {
    pub fn new(chart: Arc<Chart>) -> Result<Connection, CurvatureError> {
        let n = chart.dim();
        let g = Tensor::from_data(n, Valence::new(0, 2), chart.metric.clone());
        let ginv = Tensor::from_data(n, Valence::new(0, 2), chart.inverse_metric()?);
        let gamma = christoffel(&g, &ginv, &chart.layout)?;
        let dgamma = partials(&gamma, &chart.layout)?;
        Ok(Connection { chart, g, ginv, gamma, dgamma, ddgamma: OnceLock::new() })
    }

    /// `∂_f ∂_e Γ^m_{bc}` stored as `[m, b, c, e, f]`.
    pub fn ddgamma(&self) -> Result<&Tensor<Expr>, CurvatureError> {
        self.ddgamma.get_or_init(|| partials(&self.dgamma, &self.chart.layout).map_err(Into::into)).as_ref().map_err(Clone::clone)
    }
}

/// Evaluate an expression at a point, tracking the scale of its numerator.
pub fn approx(e: &Expr, pt: &FloatPoint) -> Option<Approx> {
    if e.is_zero() {
        return Some(Approx::zero());
    }
    let (num, mag, den) = e.eval_parts(pt);
    if !num.is_finite() || !den.is_finite() || den.abs() < 1e-12 {
        return None;
    }
    let v = num / den;
    Some(Approx { v, m: (mag / den.abs()).max(v.abs()) })
}

fn approx_tensor(t: &Tensor<Expr>, pt: &FloatPoint) -> Result<Tensor<Approx>, CurvatureError> {
    let data = t.data().iter().map(|e| approx(e, pt).ok_or(CurvatureError::Pole)).collect::<Result<Vec<_>, _>>()?;
    Ok(Tensor::from_data(t.dim(), t.valence(), data))
}

type Lazy<F> = Box<dyn Fn() -> Result<Tensor<F>, CurvatureError> + Send + Sync>;

/// Lazily derived curvature tensors over a scalar backend.
pub struct Basis<F: Field> {
    n: usize,
    g: Arc<Tensor<F>>,
    ginv: Arc<Tensor<F>>,
    gamma: Arc<Tensor<F>>,
    dgamma: Tensor<F>,
    ddgamma: OnceLock<Result<Tensor<F>, CurvatureError>>,
    dd_source: Lazy<F>,
    cache: Mutex<HashMap<Name, Arc<Tensor<F>>>>,
}

impl Basis<Expr> {
    pub fn symbolic(conn: &Arc<Connection>) -> Basis<Expr> {
        let c = conn.clone();
        Basis::from_parts(
            conn.g.clone(),
            conn.ginv.clone(),
            conn.gamma.clone(),
            conn.dgamma.clone(),
            Box::new(move || c.ddgamma().cloned()),
        )
    }
}

impl Basis<Approx> {
    /// Numeric basis at one point.
    pub fn at_point(conn: &Arc<Connection>, pt: &FloatPoint) -> Result<Basis<Approx>, CurvatureError> {
        let c = conn.clone();
        let p = pt.clone();
        Ok(Basis::from_parts(
            approx_tensor(&conn.g, pt)?,
            approx_tensor(&conn.ginv, pt)?,
            approx_tensor(&conn.gamma, pt)?,
            approx_tensor(&conn.dgamma, pt)?,
            Box::new(move || approx_tensor(c.ddgamma()?, &p)),
        ))
    }
}

impl<F: Field> Basis<F> {
    pub fn from_parts(g: Tensor<F>, ginv: Tensor<F>, gamma: Tensor<F>, dgamma: Tensor<F>, dd_source: Lazy<F>) -> Basis<F> {
        Basis {
            n: g.dim(),
            g: Arc::new(g),
            ginv: Arc::new(ginv),
            gamma: Arc::new(gamma),
            dgamma,
            ddgamma: OnceLock::new(),
            dd_source,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> &Tensor<F> {
        &self.g
    }

    pub fn inverse(&self) -> &Tensor<F> {
        &self.ginv
    }

    fn ddgamma(&self) -> Result<&Tensor<F>, CurvatureError> {
        self.ddgamma.get_or_init(|| (self.dd_source)()).as_ref().map_err(Clone::clone)
    }

    /// Scalar tensors are rank 0; this returns their value.
    pub fn scalar(&self, name: Name) -> Result<F, CurvatureError> {
        Ok(self.get(name)?.as_scalar().clone())
    }

    pub fn get(&self, name: Name) -> Result<Arc<Tensor<F>>, CurvatureError> {
        match name {
            Name::Metric => return Ok(self.g.clone()),
            Name::InverseMetric => return Ok(self.ginv.clone()),
            Name::Gamma => return Ok(self.gamma.clone()),
            _ => {}
        }
        if let Some(t) = self.cache.lock().expect("cache poisoned").get(&name) {
            return Ok(t.clone());
        }
        let t = Arc::new(self.compute(name)?);
        self.cache.lock().expect("cache poisoned").insert(name, t.clone());
        Ok(t)
    }

    fn inv_n1(&self) -> F {
        F::ratio(1, self.n as i64 - 1)
    }

    fn compute(&self, name: Name) -> Result<Tensor<F>, CurvatureError> {
        let n = self.n;
        let g = &*self.g;
        let ginv = &*self.ginv;
        Ok(match name {
            Name::Metric | Name::InverseMetric | Name::Gamma => unreachable!(),
            Name::CalR => self.riemann_endomorphism(),
            Name::R => lower(&*self.get(Name::CalR)?, 3, g)?,
            Name::S => contract(&*self.get(Name::R)?, 0, 3, ginv)?,
            Name::CalS => raise(&*self.get(Name::S)?, 1, ginv)?,
            Name::S2 => squared(&*self.get(Name::S)?, ginv)?,
            Name::Kappa => contract(&*self.get(Name::S)?, 0, 1, ginv)?,
            Name::Kappa2 => contract(&*self.get(Name::S2)?, 0, 1, ginv)?,
            Name::Z => {
                let c = self.scalar(Name::Kappa)?.mul(&F::ratio(-1, n as i64));
                Tensor::linear(&[(F::one(), &*self.get(Name::S)?), (c, g)])?
            }
            Name::E => {
                let s = self.get(Name::S)?;
                // g^{cp} S_{pq} g^{qa}
                let s_up = squared(ginv, &s)?;
                let r = self.get(Name::R)?;
                Tensor::from_fn(n, Valence::new(0, 2), |ij| {
                    let mut items: Vec<(bool, &F, &F)> = Vec::new();
                    for a in 0..n {
                        for c in 0..n {
                            let x = r.get(&[a, ij[0], ij[1], c]);
                            let y = s_up.get(&[c, a]);
                            if !x.is_zero() && !y.is_zero() {
                                items.push((false, x, y));
                            }
                        }
                    }
                    F::sum_of_products(&items).finish()
                })
            }
            Name::G => kulkarni_nomizu_general(g, g)?.scale(&F::ratio(1, 2)),
            Name::WedgeS => wedge_form(&*self.get(Name::S)?, g)?,
            Name::P => Tensor::linear(&[(F::one(), &*self.get(Name::R)?), (self.inv_n1().neg(), &*self.get(Name::WedgeS)?)])?,
            Name::C | Name::K => {
                let gs = kulkarni_nomizu_general(g, &*self.get(Name::S)?)?;
                let r = self.get(Name::R)?;
                let c2 = F::ratio(-1, n as i64 - 2);
                if name == Name::K {
                    Tensor::linear(&[(F::one(), &*r), (c2, &gs)])?
                } else {
                    let gg = kulkarni_nomizu_general(g, g)?;
                    let c3 = self.scalar(Name::Kappa)?.mul(&F::ratio(1, 2 * (n as i64 - 1) * (n as i64 - 2)));
                    Tensor::linear(&[(F::one(), &*r), (c2, &gs), (c3, &gg)])?
                }
            }
            Name::W => {
                let gg = kulkarni_nomizu_general(g, g)?;
                let c = self.scalar(Name::Kappa)?.mul(&F::ratio(-1, 2 * n as i64 * (n as i64 - 1)));
                Tensor::linear(&[(F::one(), &*self.get(Name::R)?), (c, &gg)])?
            }
            Name::CalG | Name::CalC | Name::CalW | Name::CalK | Name::CalP => {
                raise(&*self.get(name.lowered().expect("raised name"))?, 3, ginv)?
            }
            Name::GradR => lower(&self.riemann_gradient()?, 3, g)?,
            Name::GradS => contract(&*self.get(Name::GradR)?, 0, 3, ginv)?,
            Name::GradKappa => contract(&*self.get(Name::GradS)?, 0, 1, ginv)?,
            Name::GradP => {
                let gr = self.get(Name::GradR)?;
                let gs = self.get(Name::GradS)?;
                let c = self.inv_n1();
                Tensor::from_fn(n, Valence::new(0, 5), |i| {
                    let (a, b, cc, d, e) = (i[0], i[1], i[2], i[3], i[4]);
                    let corr = F::sum_of_products(&[(false, gs.get(&[b, cc, e]), g.get(&[a, d])), (true, gs.get(&[a, cc, e]), g.get(&[b, d]))]);
                    gr.get(i).sub(&corr.mul(&c)).finish()
                })
            }
        })
    }

    fn sigma(&self) -> F {
        F::constant(&Coeff::int(SIGMA))
    }

    /// `σ(∂_aΓ^m_{bc} - ∂_bΓ^m_{ac} + Γ^m_{ak}Γ^k_{bc} - Γ^m_{bk}Γ^k_{ac})`.
    fn riemann_endomorphism(&self) -> Tensor<F> {
        let n = self.n;
        let gm = &*self.gamma;
        let dg = &self.dgamma;
        let s = self.sigma();
        let one = F::one();
        Tensor::from_fn(n, Valence::new(1, 3), |i| {
            let (m, a, b, c) = (i[0], i[1], i[2], i[3]);
            if a == b {
                return F::zero();
            }
            let mut items: Vec<(bool, &F, &F)> = vec![(false, &one, dg.get(&[m, b, c, a])), (true, &one, dg.get(&[m, a, c, b]))];
            for k in 0..n {
                items.push((false, gm.get(&[m, a, k]), gm.get(&[k, b, c])));
                items.push((true, gm.get(&[m, b, k]), gm.get(&[k, a, c])));
            }
            let items: Vec<_> = items.into_iter().filter(|(_, x, y)| !x.is_zero() && !y.is_zero()).collect();
            F::sum_of_products(&items).mul(&s).finish()
        })
    }

    /// `∇_e calR^m_{abc}` stored as `[m, a, b, c, e]`.
    fn riemann_gradient(&self) -> Result<Tensor<F>, CurvatureError> {
        let n = self.n;
        let gm = &*self.gamma;
        let dg = &self.dgamma;
        let ddg = self.ddgamma()?;
        let cr = self.get(Name::CalR)?;
        let s = self.sigma();
        let one = F::one();
        Ok(Tensor::from_fn(n, Valence::new(1, 4), |i| {
            let (m, a, b, c, e) = (i[0], i[1], i[2], i[3], i[4]);
            let mut d: Vec<(bool, &F, &F)> = vec![(false, &one, ddg.get(&[m, b, c, a, e])), (true, &one, ddg.get(&[m, a, c, b, e]))];
            for k in 0..n {
                d.push((false, dg.get(&[m, a, k, e]), gm.get(&[k, b, c])));
                d.push((false, gm.get(&[m, a, k]), dg.get(&[k, b, c, e])));
                d.push((true, dg.get(&[m, b, k, e]), gm.get(&[k, a, c])));
                d.push((true, gm.get(&[m, b, k]), dg.get(&[k, a, c, e])));
            }
            let d: Vec<_> = d.into_iter().filter(|(_, x, y)| !x.is_zero() && !y.is_zero()).collect();
            let partial = F::sum_of_products(&d).mul(&s);
            let mut conn: Vec<(bool, &F, &F)> = Vec::new();
            for k in 0..n {
                conn.push((false, gm.get(&[m, e, k]), cr.get(&[k, a, b, c])));
                conn.push((true, gm.get(&[k, e, a]), cr.get(&[m, k, b, c])));
                conn.push((true, gm.get(&[k, e, b]), cr.get(&[m, a, k, c])));
                conn.push((true, gm.get(&[k, e, c]), cr.get(&[m, a, b, k])));
            }
            let conn: Vec<_> = conn.into_iter().filter(|(_, x, y)| !x.is_zero() && !y.is_zero()).collect();
            partial.add(&F::sum_of_products(&conn)).finish()
        }))
    }
}

/// Symbolic curvature suite of one chart, with numeric bases on demand.
pub struct CurvatureSuite {
    pub conn: Arc<Connection>,
    pub basis: Basis<Expr>,
}

impl CurvatureSuite {
    pub fn new(chart: Chart) -> Result<CurvatureSuite, CurvatureError> {
        let conn = Arc::new(Connection::new(Arc::new(chart))?);
        let basis = Basis::symbolic(&conn);
        Ok(CurvatureSuite { conn, basis })
    }

    pub fn chart(&self) -> &Chart {
        &self.conn.chart
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn get(&self, name: Name) -> Result<Arc<Tensor<Expr>>, CurvatureError> {
        self.basis.get(name)
    }

    /// Numeric bases at up to `count` pole-free points of `pts`.
    pub fn numeric(&self, pts: &[FloatPoint], count: usize) -> Vec<(usize, Basis<Approx>)> {
        pts.iter().enumerate().filter_map(|(i, p)| Basis::at_point(&self.conn, p).ok().map(|b| (i, b))).take(count).collect()
    }

    /// `∇T` of a named covariant tensor computed by direct differentiation.
    pub fn covariant_derivative(&self, t: &Tensor<Expr>) -> Result<Tensor<Expr>, CurvatureError> {
        covariant_derivative(t, &self.conn.gamma, &self.conn.chart.layout)
    }

    /// True when C and K carry the `1/(n-2)` terms and C vanishes identically.
    pub fn conformal_degenerate(&self) -> bool {
        self.dim() == 3
    }
}

/// Residual tensors of the first and second Bianchi identities.
pub fn bianchi_residuals<F: Field>(b: &Basis<F>) -> Result<(Tensor<F>, Tensor<F>), CurvatureError> {
    let r = b.get(Name::R)?;
    let first = gct_residuals(&r)?.first_bianchi;
    let gr = b.get(Name::GradR)?;
    let n = b.dim();
    let second = Tensor::from_fn(n, Valence::new(0, 5), |i| {
        let (a, bb, c, d, e) = (i[0], i[1], i[2], i[3], i[4]);
        F::sum(&[gr.get(&[a, bb, c, d, e]).clone(), gr.get(&[bb, e, c, d, a]).clone(), gr.get(&[e, a, c, d, bb]).clone()]).finish()
    });
    Ok((first, second))
}
