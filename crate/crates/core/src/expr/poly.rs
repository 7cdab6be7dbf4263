//! Sparse Laurent polynomials over extended monomials.
//!
//! A [`Key`] is an exponent vector. Its layout (which slot is a coordinate
//! power, a parameter, a function symbol or an exponential weight) is owned by
//! [`super::Layout`]; arithmetic here is layout-agnostic.

use std::cmp::Ordering;

use smallvec::SmallVec;

use super::coeff::Coeff;

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Key(pub(crate) SmallVec<[i32; 14]>);

impl Key {
    pub fn one() -> Key {
        Key(SmallVec::new())
    }

    pub fn from_slice(v: &[i32]) -> Key {
        let mut k = Key(SmallVec::from_slice(v));
        k.trim();
        k
    }

    pub fn unit(slot: usize, e: i32) -> Key {
        let mut v = SmallVec::from_elem(0, slot + 1);
        v[slot] = e;
        let mut k = Key(v);
        k.trim();
        k
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e != 0).map(|(i, e)| (i, *e))
    }

    pub fn with(&self, slot: usize, delta: i32) -> Key {
        let mut v = self.0.clone();
        if v.len() <= slot {
            v.resize(slot + 1, 0);
        }
        v[slot] += delta;
        let mut k = Key(v);
        k.trim();
        k
    }

    pub fn mul(&self, o: &Key) -> Key {
        let (long, short) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut v = long.0.clone();
        for (a, b) in v.iter_mut().zip(short.0.iter()) {
            *a += *b;
        }
        let mut k = Key(v);
        k.trim();
        k
    }

    pub fn inv(&self) -> Key {
        Key(self.0.iter().map(|e| -e).collect())
    }

    pub fn scale(&self, k: i32) -> Key {
        if k == 0 {
            return Key::one();
        }
        Key(self.0.iter().map(|e| e * k).collect())
    }

    pub fn div_exact(&self, k: i32) -> Option<Key> {
        if self.0.iter().all(|e| e % k == 0) {
            Some(Key(self.0.iter().map(|e| e / k).collect()))
        } else {
            None
        }
    }

    /// Keep only slots below `n`.
    pub fn truncate(&self, n: usize) -> Key {
        let mut k = Key(self.0.iter().take(n).copied().collect());
        k.trim();
        k
    }
}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        let n = self.0.len().max(o.0.len());
        for i in 0..n {
            match self.get(i).cmp(&o.get(i)) {
                Ordering::Equal => {}
                c => return c,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse sum of `coeff * key` terms, sorted by descending key, no zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    terms: Vec<(Key, Coeff)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Poly {
        Poly::monomial(Key::one(), c)
    }

    pub fn monomial(k: Key, c: Coeff) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(k, c)] }
        }
    }

    /// Build from arbitrary terms; sorts and combines.
    pub fn from_terms(mut v: Vec<(Key, Coeff)>) -> Poly {
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Key, Coeff)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = lc.add(&c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((k, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Key, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(k, c)] if k.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(k, c)] if k.is_one() && c.is_one())
    }

    pub fn lead(&self) -> Option<&(Key, Coeff)> {
        self.terms.first()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        let nb = |c: &Coeff| if negate { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), nb(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(k, c)| (k.clone(), nb(c))));
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect() }
    }

    /// Multiply by a single term. Monomial multiplication preserves order.
    pub fn mul_term(&self, k: &Key, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(a, x)| (a.mul(k), x.mul(c))).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                v.push((a.mul(b), x.mul(y)));
            }
        }
        Poly::from_terms(v)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Per-slot (min, max) exponent over all terms, padded to `width`.
    fn exponent_box(&self, width: usize) -> (Vec<i32>, Vec<i32>) {
        let mut lo = vec![i32::MAX; width];
        let mut hi = vec![i32::MIN; width];
        for (k, _) in &self.terms {
            for s in 0..width {
                let e = k.get(s);
                lo[s] = lo[s].min(e);
                hi[s] = hi[s].max(e);
            }
        }
        (lo, hi)
    }

    fn width(&self) -> usize {
        self.terms.iter().map(|(k, _)| k.len()).max().unwrap_or(0)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// Long division by the leading term. Every quotient term must lie in the
    /// exponent box `box(self) - box(d)`, which bounds the iteration.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dk, dc) = d.lead()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let (ik, ic) = (dk.inv(), dc.recip());
            return Some(self.mul_term(&ik, &ic));
        }
        if self.terms.len() < 2 {
            return None;
        }
        let width = self.width().max(d.width());
        let (plo, phi) = self.exponent_box(width);
        let (dlo, dhi) = d.exponent_box(width);
        let qlo: Vec<i32> = (0..width).map(|s| plo[s] - dlo[s]).collect();
        let qhi: Vec<i32> = (0..width).map(|s| phi[s] - dhi[s]).collect();
        if (0..width).any(|s| qlo[s] > qhi[s]) {
            return None;
        }
        let dck = dc.recip();
        let dki = dk.inv();
        let mut rem: std::collections::BTreeMap<std::cmp::Reverse<Key>, Coeff> =
            self.terms.iter().map(|(k, c)| (std::cmp::Reverse(k.clone()), c.clone())).collect();
        let mut q = Vec::new();
        while let Some((std::cmp::Reverse(rk), rc)) = rem.pop_first() {
            let tk = rk.mul(&dki);
            if (0..width).any(|s| {
                let e = tk.get(s);
                e < qlo[s] || e > qhi[s]
            }) {
                return None;
            }
            let tc = rc.mul(&dck);
            for (k, c) in d.terms.iter().skip(1) {
                let key = std::cmp::Reverse(k.mul(&tk));
                let delta = c.mul(&tc);
                let entry = rem.entry(key);
                match entry {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let v = o.get().sub(&delta);
                        if v.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = v;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(delta.neg());
                    }
                }
            }
            q.push((tk, tc));
        }
        Some(Poly { terms: q })
    }

    /// Exact k-th root with leading coefficient one and constant leading key,
    /// if `self` is a perfect k-th power in that normalization.
    pub fn root(&self, k: u32) -> Option<Poly> {
        let (lk, lc) = self.lead()?;
        if !lk.is_one() || !lc.is_one() || self.terms.len() < 2 {
            return None;
        }
        let width = self.width();
        let (lo, hi) = self.exponent_box(width);
        let kk = Coeff::int(k as i64);
        let ki = k as i64;
        let mut b = Poly::one();
        let limit = 4 * self.terms.len() + 16;
        for _ in 0..limit {
            let r = self.sub(&b.pow(k));
            let Some((rk, rc)) = r.lead() else {
                return Some(b);
            };
            if rk.len() > width
                || (0..width).any(|s| {
                    let e = rk.get(s) as i64 * ki;
                    e < lo[s] as i64 || e > hi[s] as i64
                })
            {
                return None;
            }
            b = b.add(&Poly::monomial(rk.clone(), rc.div(&kk)));
        }
        None
    }

    pub fn map_keys(&self, f: impl Fn(&Key) -> Key) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(k, c)| (f(k), c.clone())).collect())
    }
}

/// Split `p` as `unit * normalized` where `normalized` has leading term `1`.
pub fn normalize(p: &Poly) -> (Key, Coeff, Poly) {
    let (k, c) = p.lead().expect("normalize of zero polynomial").clone();
    let n = p.mul_term(&k.inv(), &c.recip());
    (k, c, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(e: i32) -> Key {
        Key::unit(0, e)
    }

    fn y(e: i32) -> Key {
        Key::unit(1, e)
    }

    fn p(v: &[(Key, i64)]) -> Poly {
        Poly::from_terms(v.iter().map(|(k, c)| (k.clone(), Coeff::int(*c))).collect())
    }

    #[test]
    fn key_order_and_trim() {
        assert_eq!(Key::from_slice(&[1, 0, 0]), Key::unit(0, 1));
        assert!(x(1) > Key::one());
        assert!(Key::one() > x(-1));
        assert!(y(1) < x(1));
        assert_eq!(x(2).mul(&x(-2)), Key::one());
    }

    #[test]
    fn division_round_trip() {
        let a = p(&[(x(1), 1), (y(1), 3), (Key::one(), 2)]);
        let b = p(&[(x(2), 1), (y(-1), -1)]);
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&b), Some(a.clone()));
        assert_eq!(ab.div_exact(&a), Some(b));
        let c = p(&[(x(1), 1), (Key::one(), 1)]);
        assert_eq!(ab.div_exact(&c), None);
    }

    #[test]
    fn perfect_powers() {
        let b = p(&[(Key::one(), 1), (x(-1), 2), (y(-3), -5)]);
        for k in 2..5 {
            assert_eq!(b.pow(k).root(k), Some(b.clone()));
        }
        let not = p(&[(Key::one(), 1), (x(-1), 2)]);
        assert_eq!(not.root(2), None);
    }
}
