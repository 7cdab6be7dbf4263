use std::fmt::Debug;

use crate::expr::{Coeff, Expr};

/// Scalar backend for tensors: exact [`Expr`] or floating [`Approx`].
pub trait Field: Clone + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn constant(c: &Coeff) -> Self;
    /// Structural zero; exact for `Expr`.
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, o: &Self) -> Option<Self>;
    fn sum(items: &[Self]) -> Self;
    /// `sum_i (-1)^neg_i a_i b_i`.
    fn sum_of_products(items: &[(bool, &Self, &Self)]) -> Self;
    /// Normalization hook applied to finished tensor components.
    fn finish(self) -> Self {
        self
    }

    fn one() -> Self {
        Self::constant(&Coeff::one())
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::constant(&Coeff::ratio(n, d))
    }

    fn scale(&self, c: &Coeff) -> Self {
        self.mul(&Self::constant(c))
    }
}

impl Field for Expr {
    fn zero() -> Self {
        Expr::zero()
    }

    fn constant(c: &Coeff) -> Self {
        Expr::constant(c.clone())
    }

    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }

    fn add(&self, o: &Self) -> Self {
        Expr::add(self, o)
    }

    fn sub(&self, o: &Self) -> Self {
        Expr::sub(self, o)
    }

    fn mul(&self, o: &Self) -> Self {
        Expr::mul(self, o)
    }

    fn neg(&self) -> Self {
        Expr::neg(self)
    }

    fn div(&self, o: &Self) -> Option<Self> {
        Expr::div(self, o).ok()
    }

    fn sum(items: &[Self]) -> Self {
        Expr::sum(items.iter())
    }

    fn sum_of_products(items: &[(bool, &Self, &Self)]) -> Self {
        Expr::sum_of_products(items)
    }

    fn finish(self) -> Self {
        self.simplify()
    }

    fn scale(&self, c: &Coeff) -> Self {
        Expr::scale(self, c)
    }
}

/// A float together with the largest magnitude that entered its
/// computation, so cancellation can be judged relative to that scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub v: f64,
    pub m: f64,
}

impl Approx {
    pub fn new(v: f64) -> Approx {
        Approx { v, m: v.abs() }
    }

    /// `|v| / (1 + m)`.
    pub fn relative(&self) -> f64 {
        self.v.abs() / (1.0 + self.m)
    }
}

impl Field for Approx {
    fn zero() -> Self {
        Approx { v: 0.0, m: 0.0 }
    }

    fn constant(c: &Coeff) -> Self {
        Approx::new(c.to_f64())
    }

    fn is_zero(&self) -> bool {
        self.v == 0.0 && self.m == 0.0
    }

    fn add(&self, o: &Self) -> Self {
        let v = self.v + o.v;
        Approx { v, m: self.m.max(o.m).max(v.abs()) }
    }

    fn sub(&self, o: &Self) -> Self {
        let v = self.v - o.v;
        Approx { v, m: self.m.max(o.m).max(v.abs()) }
    }

    fn mul(&self, o: &Self) -> Self {
        Approx { v: self.v * o.v, m: self.m * o.m }
    }

    fn neg(&self) -> Self {
        Approx { v: -self.v, m: self.m }
    }

    fn div(&self, o: &Self) -> Option<Self> {
        if o.v == 0.0 {
            return None;
        }
        let v = self.v / o.v;
        Some(Approx { v, m: (self.m / o.v.abs()).max(v.abs()) })
    }

    fn sum(items: &[Self]) -> Self {
        let mut acc = Approx::zero();
        for x in items {
            acc = acc.add(x);
        }
        acc
    }

    fn sum_of_products(items: &[(bool, &Self, &Self)]) -> Self {
        let mut acc = Approx::zero();
        for (neg, a, b) in items {
            let p = a.mul(b);
            acc = if *neg { acc.sub(&p) } else { acc.add(&p) };
        }
        acc
    }
}
