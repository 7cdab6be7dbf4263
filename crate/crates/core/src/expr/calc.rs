//! Differentiation and evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::coeff::Coeff;
use super::layout::{Layout, Slot, EXP_SCALE};
use super::poly::Poly;
use super::quot::Expr;
use super::ExprError;

/// Derivative of a polynomial with respect to coordinate `i`.
pub fn diff_poly(p: &Poly, i: usize, l: &Layout) -> Result<Poly, ExprError> {
    let mut v = Vec::new();
    let cs = l.coord_slot(i);
    let es = l.exp_slot(i);
    let funcs: Vec<usize> = (0..l.funcs.len()).filter(|f| l.funcs[*f].arg == i).collect();
    for (k, c) in p.terms() {
        let e = k.get(cs);
        if e != 0 {
            v.push((k.with(cs, -1), c.mul(&Coeff::int(e as i64))));
        }
        let w = k.get(es);
        if w != 0 {
            v.push((k.clone(), c.mul(&Coeff::ratio(w as i64, EXP_SCALE as i64))));
        }
        for f in &funcs {
            for order in 0..3 {
                let s = l.func_slot(*f, order);
                let e = k.get(s);
                if e == 0 {
                    continue;
                }
                if order == 2 {
                    return Err(ExprError::DerivativeOrder(l.funcs[*f].name.clone()));
                }
                let nk = k.with(s, -1).with(s + 1, 1);
                v.push((nk, c.mul(&Coeff::int(e as i64))));
            }
        }
    }
    Ok(Poly::from_terms(v))
}

impl Expr {
    /// Partial derivative with respect to coordinate `i`.
    pub fn diff(&self, i: usize, l: &Layout) -> Result<Expr, ExprError> {
        let dn = diff_poly(self.numer(), i, l)?;
        let atoms: Vec<(Poly, u32)> = self.atoms().map(|(a, k)| (a.clone(), k)).collect();
        if atoms.is_empty() {
            return Ok(Expr::from_poly(dn));
        }
        // d(N / prod a^k) = (N' prod a - N sum k a' prod_{j != i} a) / prod a^(k+1)
        let mut all = Poly::one();
        for (a, _) in &atoms {
            all = all.mul(a);
        }
        let mut num = dn.mul(&all);
        for (idx, (a, k)) in atoms.iter().enumerate() {
            let da = diff_poly(a, i, l)?;
            if da.is_zero() {
                continue;
            }
            let mut rest = Poly::one();
            for (j, (b, _)) in atoms.iter().enumerate() {
                if j != idx {
                    rest = rest.mul(b);
                }
            }
            let t = self.numer().mul(&da).mul(&rest).scale(&Coeff::int(*k as i64));
            num = num.sub(&t);
        }
        let den = atoms.into_iter().map(|(a, k)| (a, k + 1)).collect();
        Ok(Expr::from_parts(num, den).simplify())
    }
}

/// Exact values for every symbol of a layout.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub coords: Vec<BigRational>,
    pub params: Vec<BigRational>,
    /// Values of `f`, `f'`, `f''` for each function symbol.
    pub funcs: Vec<[BigRational; 3]>,
}

impl Assignment {
    pub fn to_float(&self, l: &Layout) -> FloatPoint {
        let n = l.dim();
        let mut slots = vec![0.0; l.exp_offset()];
        for i in 0..n {
            slots[l.coord_slot(i)] = self.coords[i].to_f64().unwrap_or(f64::NAN);
        }
        for (j, p) in self.params.iter().enumerate() {
            slots[l.param_slot(j)] = p.to_f64().unwrap_or(f64::NAN);
        }
        for (f, v) in self.funcs.iter().enumerate() {
            for o in 0..3 {
                slots[l.func_slot(f, o)] = v[o].to_f64().unwrap_or(f64::NAN);
            }
        }
        FloatPoint { slots, coords: self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect() }
    }
}

/// Floating-point values per non-exponential slot.
#[derive(Clone, Debug)]
pub struct FloatPoint {
    pub slots: Vec<f64>,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }
}

/// Value and largest absolute term of a polynomial.
pub fn eval_poly_f64(p: &Poly, pt: &FloatPoint) -> (f64, f64) {
    let off = pt.slots.len();
    let mut sum = 0.0;
    let mut mag: f64 = 0.0;
    for (k, c) in p.terms() {
        let mut t = c.to_f64();
        let mut lin = 0.0;
        for (s, e) in k.entries() {
            if s < off {
                t *= pt.slots[s].powi(e);
            } else if s - off < pt.coords.len() {
                lin += e as f64 * pt.coords[s - off];
            }
        }
        if lin != 0.0 {
            t *= (lin / EXP_SCALE as f64).exp();
        }
        sum += t;
        mag = mag.max(t.abs());
    }
    (sum, mag)
}

fn eval_poly_exact(p: &Poly, a: &Assignment, l: &Layout) -> Option<Result<BigRational, ExprError>> {
    let mut sum = BigRational::zero();
    for (k, c) in p.terms() {
        let mut t = c.to_big();
        for (s, e) in k.entries() {
            let v = match l.slot(s) {
                Slot::Coord(i) => &a.coords[i],
                Slot::Param(j) => &a.params[j],
                Slot::Func { func, order } => &a.funcs[func][order],
                Slot::Exp(_) | Slot::Extra(_) => return None,
            };
            if e < 0 && v.is_zero() {
                return Some(Err(ExprError::Pole));
            }
            let base = if e < 0 { v.recip() } else { v.clone() };
            t *= num_traits::pow(base, e.unsigned_abs() as usize);
        }
        sum += t;
    }
    Some(Ok(sum))
}

impl Expr {
    /// Evaluate at a point. Exact when no exponential survives.
    pub fn eval(&self, l: &Layout, a: &Assignment) -> Result<Value, ExprError> {
        let s = self.simplify();
        let den = s.denom_poly();
        if let (Some(n), Some(d)) = (eval_poly_exact(s.numer(), a, l), eval_poly_exact(&den, a, l)) {
            let (n, d) = (n?, d?);
            if d.is_zero() {
                return Err(ExprError::Pole);
            }
            return Ok(Value::Exact(n / d));
        }
        let pt = a.to_float(l);
        let (n, _) = eval_poly_f64(s.numer(), &pt);
        let (d, dm) = eval_poly_f64(&den, &pt);
        if d.abs() <= 1e-14 * dm.max(1.0) {
            return Err(ExprError::Pole);
        }
        Ok(Value::Float(n / d))
    }

    /// Float evaluation: (value, numerator, numerator magnitude, denominator).
    pub fn eval_parts(&self, pt: &FloatPoint) -> (f64, f64, f64) {
        let (n, nm) = eval_poly_f64(self.numer(), pt);
        let mut d = 1.0;
        for (a, k) in self.atoms() {
            d *= eval_poly_f64(a, pt).0.powi(k as i32);
        }
        (n, nm, d)
    }

    pub fn eval_f64(&self, pt: &FloatPoint) -> f64 {
        let (n, _, d) = self.eval_parts(pt);
        n / d
    }
}

pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
