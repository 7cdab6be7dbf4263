//! Quotients `numerator / product of atoms^k`.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use smallvec::SmallVec;

use super::coeff::Coeff;
use super::poly::{normalize, Key, Poly};
use super::ExprError;

/// A normalized denominator factor: leading term `1`, at least two terms.
#[derive(Clone, Debug)]
pub struct Atom(Arc<Poly>);

impl Atom {
    fn new(p: Poly) -> Atom {
        debug_assert!(p.lead().map(|(k, c)| k.is_one() && c.is_one()).unwrap_or(false));
        Atom(Arc::new(p))
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }
}

impl PartialEq for Atom {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || *self.0 == *o.0
    }
}

impl Eq for Atom {}

impl Ord for Atom {
    fn cmp(&self, o: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &o.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&o.0)
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.hash(h)
    }
}

type Den = SmallVec<[(Atom, u32); 2]>;

/// A symbolic scalar field. See the module docs for the term language.
#[derive(Clone, Debug, Default)]
pub struct Expr {
    num: Poly,
    den: Den,
}

fn den_mul(a: &Den, b: &Den) -> Den {
    let mut out = Den::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().cloned());
    out
}

fn den_lcm(a: &Den, b: &Den) -> Den {
    let mut out = Den::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1.max(b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().cloned());
    out
}

/// `big / small` for dens where `small` divides `big`.
fn den_cofactor(big: &Den, small: &Den) -> Den {
    let mut out = Den::new();
    for (a, k) in big {
        let s = small.iter().find(|(b, _)| b == a).map(|(_, m)| *m).unwrap_or(0);
        if *k > s {
            out.push((a.clone(), k - s));
        }
    }
    out
}

/// Split `a / b` into (a without common, b without common).
fn den_cancel(a: &Den, b: &Den) -> (Den, Den) {
    let mut ra = Den::new();
    let mut rb = Den::new();
    for (x, k) in a {
        let m = b.iter().find(|(y, _)| y == x).map(|(_, m)| *m).unwrap_or(0);
        if *k > m {
            ra.push((x.clone(), k - m));
        }
    }
    for (y, m) in b {
        let k = a.iter().find(|(x, _)| x == y).map(|(_, k)| *k).unwrap_or(0);
        if *m > k {
            rb.push((y.clone(), m - k));
        }
    }
    (ra, rb)
}

fn den_expand(d: &Den) -> Poly {
    let mut acc = Poly::one();
    for (a, k) in d {
        acc = acc.mul(&a.poly().pow(*k));
    }
    acc
}

/// Largest `(base, e)` with `p = base^e`, trying small prime exponents.
fn max_root(p: Poly) -> (Poly, u32) {
    let mut base = p;
    let mut e = 1;
    'outer: loop {
        for k in [2u32, 3, 5, 7] {
            if let Some(r) = base.root(k) {
                base = r;
                e *= k;
                continue 'outer;
            }
        }
        return (base, e);
    }
}

/// Factor a nonzero polynomial as `coeff * key * atoms`, trial-dividing by
/// `hints` first.
fn factor(p: &Poly, hints: &[&Atom]) -> (Key, Coeff, Den) {
    let (k, c, mut rem) = normalize(p);
    let mut den = Den::new();
    if rem.is_one() {
        return (k, c, den);
    }
    for h in hints {
        while let Some(q) = rem.div_exact(h.poly()) {
            den = den_mul(&den, &SmallVec::from_elem(((*h).clone(), 1), 1));
            rem = q;
            if rem.is_one() {
                return (k, c, den);
            }
        }
    }
    let (base, e) = max_root(rem);
    den = den_mul(&den, &SmallVec::from_elem((Atom::new(base), e), 1));
    (k, c, den)
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Expr {
        Expr { num: Poly::constant(c), den: Den::new() }
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(Coeff::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::constant(Coeff::ratio(n, d))
    }

    pub fn from_poly(p: Poly) -> Expr {
        Expr { num: p, den: Den::new() }
    }

    pub fn monomial(k: Key, c: Coeff) -> Expr {
        Expr::from_poly(Poly::monomial(k, c))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(a, k)| (a.poly(), *k))
    }

    pub fn denom_poly(&self) -> Poly {
        den_expand(&self.den)
    }

    pub fn has_denominator(&self) -> bool {
        !self.den.is_empty()
    }

    /// True when the numerator has no terms. The representation is
    /// canonical enough that this decides zero exactly.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        if self.num.is_zero() {
            return Some(Coeff::zero());
        }
        let s = self.simplify();
        if s.den.is_empty() {
            s.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> Expr {
        Expr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &Coeff) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_monomial(&self, k: &Key, c: &Coeff) -> Expr {
        if c.is_zero() || self.num.is_zero() {
            return Expr::zero();
        }
        Expr { num: self.num.mul_term(k, c), den: self.den.clone() }
    }

    pub fn add(&self, o: &Expr) -> Expr {
        Expr::sum([self, o])
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        Expr::sum([self, &o.neg()])
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        if self.num.is_zero() || o.num.is_zero() {
            return Expr::zero();
        }
        Expr { num: self.num.mul(&o.num), den: den_mul(&self.den, &o.den) }
    }

    /// Sum over a common denominator.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Expr {
        let items: SmallVec<[&Expr; 8]> = items.into_iter().filter(|e| !e.num.is_zero()).collect();
        match items.len() {
            0 => return Expr::zero(),
            1 => return items[0].clone(),
            _ => {}
        }
        if items.iter().all(|e| e.den == items[0].den) {
            let mut v = Vec::with_capacity(items.iter().map(|e| e.num.len()).sum());
            for e in &items {
                v.extend(e.num.terms().iter().cloned());
            }
            let num = Poly::from_terms(v);
            if num.is_zero() {
                return Expr::zero();
            }
            return Expr { num, den: items[0].den.clone() };
        }
        let mut lcm = Den::new();
        for e in &items {
            lcm = den_lcm(&lcm, &e.den);
        }
        let mut cache: SmallVec<[(Den, Poly); 4]> = SmallVec::new();
        let mut v = Vec::new();
        for e in &items {
            let cof = den_cofactor(&lcm, &e.den);
            let scaled = if cof.is_empty() {
                e.num.clone()
            } else {
                let f = match cache.iter().find(|(d, _)| *d == cof) {
                    Some((_, p)) => p.clone(),
                    None => {
                        let p = den_expand(&cof);
                        cache.push((cof, p.clone()));
                        p
                    }
                };
                e.num.mul(&f)
            };
            v.extend(scaled.terms().iter().cloned());
        }
        let num = Poly::from_terms(v);
        if num.is_zero() {
            return Expr::zero();
        }
        Expr { num, den: lcm }
    }

    /// `sum_i sign_i * a_i * b_i`.
    pub fn sum_of_products(items: &[(bool, &Expr, &Expr)]) -> Expr {
        let prods: SmallVec<[Expr; 8]> = items
            .iter()
            .filter(|(_, a, b)| !a.num.is_zero() && !b.num.is_zero())
            .map(|(neg, a, b)| {
                let p = a.mul(b);
                if *neg {
                    p.neg()
                } else {
                    p
                }
            })
            .collect();
        Expr::sum(prods.iter())
    }

    pub fn recip(&self) -> Result<Expr, ExprError> {
        self.recip_with_hints(&[])
    }

    fn recip_with_hints(&self, hints: &[&Atom]) -> Result<Expr, ExprError> {
        if self.num.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let (k, c, den) = factor(&self.num, hints);
        let num = den_expand(&self.den).mul_term(&k.inv(), &c.recip());
        Ok(Expr { num, den }.simplify())
    }

    pub fn div(&self, o: &Expr) -> Result<Expr, ExprError> {
        if o.num.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if self.num.is_zero() {
            return Ok(Expr::zero());
        }
        if let Some(q) = self.num.div_exact(&o.num) {
            let (a, b) = den_cancel(&self.den, &o.den);
            let num = q.mul(&den_expand(&b));
            return Ok(Expr { num, den: a }.simplify());
        }
        let hints: SmallVec<[&Atom; 4]> = self.den.iter().map(|(a, _)| a).collect();
        let (k, c, nden) = factor(&o.num, &hints);
        let (a, b) = den_cancel(&self.den, &o.den);
        let num = self.num.mul(&den_expand(&b)).mul_term(&k.inv(), &c.recip());
        Ok(Expr { num, den: den_mul(&a, &nden) }.simplify())
    }

    pub fn powi(&self, e: i32) -> Result<Expr, ExprError> {
        if e < 0 {
            return self.recip()?.powi(-e);
        }
        let e = e as u32;
        if self.num.is_monomial() {
            let (k, c) = &self.num.terms()[0];
            let mut den = Den::new();
            for (a, m) in &self.den {
                den.push((a.clone(), m * e));
            }
            return Ok(Expr { num: Poly::monomial(k.scale(e as i32), c.pow(e as i32)), den });
        }
        let mut den = Den::new();
        for (a, m) in &self.den {
            den.push((a.clone(), m * e));
        }
        Ok(Expr { num: self.num.pow(e), den })
    }

    /// Cancel atoms that divide the numerator.
    pub fn simplify(&self) -> Expr {
        if self.num.is_zero() {
            return Expr::zero();
        }
        if self.den.is_empty() {
            return self.clone();
        }
        let mut num = self.num.clone();
        let mut den = Den::new();
        for (a, k) in &self.den {
            let mut left = *k;
            while left > 0 {
                match num.div_exact(a.poly()) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.push((a.clone(), left));
            }
        }
        Expr { num, den }
    }

    /// Numerator and denominator polynomials of `self - o` before reduction.
    pub fn cross_difference(&self, o: &Expr) -> Poly {
        let lcm = den_lcm(&self.den, &o.den);
        let a = self.num.mul(&den_expand(&den_cofactor(&lcm, &self.den)));
        let b = o.num.mul(&den_expand(&den_cofactor(&lcm, &o.den)));
        a.sub(&b)
    }

    /// Apply `f` to every key of numerator and atoms. `f` must be a
    /// monoid homomorphism that keeps atom leading terms at the identity.
    pub(crate) fn map_keys(&self, f: &dyn Fn(&Key) -> Key) -> Expr {
        let mut num = self.num.map_keys(f);
        let mut den = Den::new();
        for (a, k) in &self.den {
            let p = a.poly().map_keys(f);
            let (lk, lc, np) = normalize(&p);
            let e = *k as i32;
            num = num.mul_term(&lk.scale(-e), &lc.pow(-e));
            if np.is_one() {
                continue;
            }
            den = den_mul(&den, &SmallVec::from_elem((Atom::new(np), *k), 1));
        }
        Expr { num, den }
    }

    /// Keep only numerator terms accepted by `keep`.
    pub(crate) fn filter_numerator(&self, keep: &dyn Fn(&Key) -> bool) -> Expr {
        let num = Poly::from_terms(self.num.terms().iter().filter(|(k, _)| keep(k)).cloned().collect());
        Expr { num, den: self.den.clone() }
    }

    pub(crate) fn from_parts(num: Poly, atoms: Vec<(Poly, u32)>) -> Expr {
        let mut den = Den::new();
        for (p, k) in atoms {
            den = den_mul(&den, &SmallVec::from_elem((Atom::new(p), k), 1));
        }
        Expr { num, den }
    }
}

impl PartialEq for Expr {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.cross_difference(o).is_zero()
    }
}

impl Eq for Expr {}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                Expr::$f(self, o)
            }
        }
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$f(&self, &o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}
