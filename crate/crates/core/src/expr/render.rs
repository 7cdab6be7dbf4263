//! Display normalization.
//!
//! Denominator atoms are scaled to have nonnegative exponents and coprime
//! integer coefficients; numerator terms are printed in ascending order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::coeff::Coeff;
use super::layout::{Layout, Slot, EXP_SCALE};
use super::poly::{normalize, Key, Poly};
use super::quot::Expr;

/// `p * key * coeff` with nonnegative exponents, integer coprime
/// coefficients and a positive leading term.
fn nice(p: &Poly) -> (Poly, Key, Coeff) {
    let width = p.terms().iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut shift = vec![0i32; width];
    for (k, _) in p.terms() {
        for (s, e) in k.entries() {
            shift[s] = shift[s].max(-e);
        }
    }
    let u = Key::from_slice(&shift);
    let mut l = BigInt::one();
    let mut g = BigInt::from(0);
    for (_, c) in p.terms() {
        let r = c.to_big();
        l = l.lcm(r.denom());
        g = g.gcd(r.numer());
    }
    let mut w = BigRational::new(l, g);
    if p.lead().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        w = -w;
    }
    let w = Coeff::from_big(w);
    (p.mul_term(&u, &w), u, w)
}

fn pow_suffix(e: i32) -> String {
    if e == 1 {
        String::new()
    } else {
        format!("^{e}")
    }
}

/// Factors of a monomial key: (positive part, negative part).
fn key_factors(k: &Key, l: &Layout) -> (Vec<String>, Vec<String>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut push = |name: String, e: i32| {
        if e > 0 {
            pos.push(format!("{name}{}", pow_suffix(e)));
        } else if e < 0 {
            neg.push(format!("{name}{}", pow_suffix(-e)));
        }
    };
    let mut lin: Vec<(usize, i32)> = Vec::new();
    for (s, e) in k.entries() {
        match l.slot(s) {
            Slot::Coord(i) => push(l.coords[i].clone(), e),
            Slot::Param(j) => push(l.params[j].name.clone(), e),
            Slot::Func { func, order } => push(format!("{}{}", l.funcs[func].name, "'".repeat(order)), e),
            Slot::Exp(i) => lin.push((i, e)),
            Slot::Extra(j) => push(l.extras[j].clone(), e),
        }
    }
    if !lin.is_empty() {
        let mut s = String::new();
        for (i, w) in lin {
            let c = Coeff::ratio(w as i64, EXP_SCALE as i64);
            let name = &l.coords[i];
            let body = if c.is_one() || c.neg().is_one() {
                name.clone()
            } else {
                let a = if c.is_negative() { c.neg() } else { c.clone() };
                format!("{a}*{name}")
            };
            if c.is_negative() {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            s.push_str(&body);
        }
        pos.push(format!("exp({s})"));
    }
    (pos, neg)
}

fn join_product(items: &[String]) -> String {
    items.join("*")
}

fn wrap_den(items: &[String]) -> String {
    if items.len() == 1 {
        items[0].clone()
    } else {
        format!("({})", items.join("*"))
    }
}

/// Render `sign * coeff * key * extra_num / extra_den`.
fn assemble(c: &Coeff, k: &Key, extra_num: &[String], extra_den: &[String], l: &Layout) -> String {
    let r = c.to_big();
    let neg = r.is_negative();
    let p = r.numer().abs();
    let q = r.denom().clone();
    let (pos, negf) = key_factors(k, l);
    let mut num: Vec<String> = pos;
    num.extend(extra_num.iter().cloned());
    let mut den: Vec<String> = negf;
    den.extend(extra_den.iter().cloned());
    let sign = if neg { "-" } else { "" };
    if den.is_empty() {
        let coef = if q.is_one() { p.to_string() } else { format!("{p}/{q}") };
        if num.is_empty() {
            return format!("{sign}{coef}");
        }
        if coef == "1" {
            return format!("{sign}{}", join_product(&num));
        }
        return format!("{sign}{coef}*{}", join_product(&num));
    }
    if !p.is_one() || num.is_empty() {
        num.insert(0, p.to_string());
    }
    if !q.is_one() {
        den.insert(0, q.to_string());
    }
    format!("{sign}{}/{}", join_product(&num), wrap_den(&den))
}

/// Sum in ascending key order.
pub fn render_poly(p: &Poly, l: &Layout) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.terms().iter().rev() {
        let t = assemble(c, k, &[], &[], l);
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

fn paren(p: &Poly, l: &Layout) -> String {
    if p.len() > 1 {
        format!("({})", render_poly(p, l))
    } else {
        render_poly(p, l)
    }
}

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

pub fn render(e: &Expr, l: &Layout) -> String {
    let s = e.simplify();
    if s.is_zero() {
        return "0".into();
    }
    let mut num = s.numer().clone();
    let mut den_items = Vec::new();
    for (a, k) in s.atoms() {
        let (b, u, w) = nice(a);
        let kk = k as i32;
        num = num.mul_term(&u.scale(kk), &w.pow(kk));
        den_items.push(format!("({}){}", render_poly(&b, l), pow_suffix(kk)));
    }
    if den_items.is_empty() {
        let plain = num.len() == 1
            || num
                .terms()
                .iter()
                .all(|(k, c)| c.is_integer() && k.entries().all(|(s, e)| e > 0 || matches!(l.slot(s), Slot::Exp(_))));
        if plain {
            return render_poly(&num, l);
        }
    }
    if num.len() == 1 {
        let (k, c) = &num.terms()[0];
        return assemble(c, k, &[], &den_items, l);
    }
    let (b, u, w) = nice(&num);
    let (mk, mc) = (u.inv(), w.recip());
    let (lk, lc, nb) = normalize(&b);
    let (r, ex) = max_root(nb);
    if ex > 1 {
        let (rn, ru, rw) = nice(&r);
        let e = ex as i32;
        let k = mk.mul(&lk).mul(&ru.scale(-e));
        let c = mc.mul(&lc).mul(&rw.pow(-e));
        let body = format!("({}){}", render_poly(&rn, l), pow_suffix(e));
        return assemble(&c, &k, &[body], &den_items, l);
    }
    let body = paren(&b, l);
    assemble(&mc, &mk, &[body], &den_items, l)
}
