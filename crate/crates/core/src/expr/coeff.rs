//! Exact rational coefficients with an inline fast path.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// A rational number. `Small(n, d)` is always reduced with `d > 0`; `Big` is
/// only used when the value does not fit the small form.
#[derive(Clone, Debug)]
pub enum Coeff {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn from_i128(n: i128, d: i128) -> Coeff {
    let (mut n, mut d) = (n, d);
    if d < 0 {
        n = -n;
        d = -d;
    }
    let g = n.gcd(&d);
    if g > 1 {
        n /= g;
        d /= g;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Coeff::Small(a, b),
        _ => Coeff::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Small(0, 1)
    }

    pub fn one() -> Self {
        Coeff::Small(1, 1)
    }

    pub fn int(n: i64) -> Self {
        Coeff::Small(n, 1)
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        from_i128(n as i128, d as i128)
    }

    pub fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            Coeff::Small(n, d)
        } else {
            Coeff::Big(Box::new(r))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Coeff::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Coeff::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Small(n, _) => *n < 0,
            Coeff::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Coeff::Small(_, d) => *d == 1,
            Coeff::Big(b) => b.is_integer(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Small(n, d) => *n as f64 / *d as f64,
            Coeff::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Coeff::Small(s, 1);
                    }
                }
                from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Coeff::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        return Coeff::Small(p, 1);
                    }
                }
                from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Coeff::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(n, d) => match n.checked_neg() {
                Some(m) => Coeff::Small(m, *d),
                None => from_i128(-(*n as i128), *d as i128),
            },
            Coeff::Big(b) => Coeff::from_big(-(**b).clone()),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Coeff {
        match self {
            Coeff::Small(0, _) => panic!("reciprocal of zero coefficient"),
            Coeff::Small(n, d) => from_i128(*d as i128, *n as i128),
            Coeff::Big(b) => Coeff::from_big(b.recip()),
        }
    }

    pub fn div(&self, o: &Coeff) -> Coeff {
        self.mul(&o.recip())
    }

    pub fn pow(&self, e: i32) -> Coeff {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Coeff::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Exact rational k-th root, if it exists.
    pub fn root(&self, k: u32) -> Option<Coeff> {
        let r = self.to_big();
        if r.is_negative() && k.is_multiple_of(2) {
            return None;
        }
        let n = int_root(r.numer(), k)?;
        let d = int_root(r.denom(), k)?;
        Some(Coeff::from_big(BigRational::new(n, d)))
    }
}

fn int_root(x: &BigInt, k: u32) -> Option<BigInt> {
    let neg = x.is_negative();
    let a = x.abs();
    let r = a.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == a {
        Some(if neg { -r } else { r })
    } else {
        None
    }
}

impl PartialEq for Coeff {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => a == c && b == d,
            (Coeff::Big(a), Coeff::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Coeff {}

impl Hash for Coeff {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Coeff::Small(n, d) => {
                n.hash(h);
                d.hash(h);
            }
            Coeff::Big(b) => b.hash(h),
        }
    }
}

impl Ord for Coeff {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(n, 1) => write!(f, "{n}"),
            Coeff::Small(n, d) => write!(f, "{n}/{d}"),
            Coeff::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Coeff::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::Small(n, 1)
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Coeff::int(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Coeff::Big(_)));
        let back = sq.div(&big);
        assert_eq!(back, big);
        assert!(matches!(back, Coeff::Small(..)));
    }

    #[test]
    fn reduced_small_form() {
        assert_eq!(Coeff::ratio(6, -4), Coeff::Small(-3, 2));
        assert_eq!(Coeff::ratio(1, 3).add(&Coeff::ratio(1, 6)), Coeff::ratio(1, 2));
        assert_eq!(Coeff::int(i64::MIN).neg().neg(), Coeff::int(i64::MIN));
    }

    #[test]
    fn roots() {
        assert_eq!(Coeff::ratio(9, 4).root(2), Some(Coeff::ratio(3, 2)));
        assert_eq!(Coeff::ratio(-8, 27).root(3), Some(Coeff::ratio(-2, 3)));
        assert_eq!(Coeff::int(2).root(2), None);
        assert_eq!(Coeff::int(-4).root(2), None);
    }
}
