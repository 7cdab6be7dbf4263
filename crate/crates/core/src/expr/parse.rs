//! Recursive-descent parser for scalar expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := ("-" | "+") factor | base ("^" power)?
//! power  := integer | "-" integer | "(" "-"? integer ")"
//! base   := number | name "'"* ("(" coord ")")? | "exp" "(" expr ")" | "(" expr ")"
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::coeff::Coeff;
use super::layout::{Layout, EXP_SCALE};
use super::poly::Key;
use super::quot::Expr;
use super::ExprError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Name(String),
    Prime,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && i + 1 < b.len() && (b[i + 1] as char).is_ascii_digit()) {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let mut digits = s[start..i].to_string();
            let mut scale = 0u32;
            if i < b.len() && b[i] == b'.' {
                i += 1;
                let fs = i;
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                digits.push_str(&s[fs..i]);
                scale = (i - fs) as u32;
            }
            let n: BigInt = digits.parse().map_err(|_| ExprError::parse(start, "bad number"))?;
            let d = num_traits::pow(BigInt::from(10), scale as usize);
            out.push((start, Tok::Num(BigRational::new(n, d))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(s[start..i].to_string())));
        } else if c == '\'' {
            out.push((i, Tok::Prime));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ExprError::parse(i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    layout: &'a Layout,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ExprError::parse(self.at(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut parts = vec![self.term()?];
        loop {
            if self.eat('+') {
                parts.push(self.term()?);
            } else if self.eat('-') {
                parts.push(self.term()?.neg());
            } else {
                break;
            }
        }
        Ok(Expr::sum(parts.iter()))
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let at = self.at();
                let d = self.factor()?;
                acc = acc.div(&d).map_err(|_| ExprError::parse(at, "division by zero"))?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat('+') {
            return self.factor();
        }
        let b = self.base()?;
        if self.eat('^') {
            let at = self.at();
            let e = self.power()?;
            return b.powi(e).map_err(|_| ExprError::parse(at, "negative power of zero"));
        }
        Ok(b)
    }

    fn power(&mut self) -> Result<i32, ExprError> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let at = self.at();
        let n = match self.peek() {
            Some(Tok::Num(r)) if r.is_integer() => r.to_integer().to_i32(),
            _ => None,
        }
        .ok_or_else(|| ExprError::parse(at, "exponent must be an integer"))?;
        self.pos += 1;
        if paren {
            self.expect(')')?;
        }
        Ok(if neg { -n } else { n })
    }

    fn base(&mut self) -> Result<Expr, ExprError> {
        let at = self.at();
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Expr::constant(Coeff::from_big(r)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Name(n)) if n == "exp" => {
                self.pos += 1;
                self.expect('(')?;
                let inner_at = self.at();
                let e = self.expr()?;
                self.expect(')')?;
                self.exponential(&e, inner_at)
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                let mut primes = 0;
                while self.peek() == Some(&Tok::Prime) {
                    self.pos += 1;
                    primes += 1;
                }
                self.symbol(&n, primes, at)
            }
            _ => Err(ExprError::parse(at, "expected a number, name or '('")),
        }
    }

    fn symbol(&mut self, n: &str, primes: usize, at: usize) -> Result<Expr, ExprError> {
        let l = self.layout;
        let slot = if let Some(i) = l.coord_index(n) {
            if primes > 0 {
                return Err(ExprError::parse(at, "only function symbols take primes"));
            }
            l.coord_slot(i)
        } else if let Some(j) = l.params.iter().position(|p| p.name == n) {
            if primes > 0 {
                return Err(ExprError::parse(at, "only function symbols take primes"));
            }
            l.param_slot(j)
        } else if let Some(f) = l.funcs.iter().position(|f| f.name == n) {
            if primes > 2 {
                return Err(ExprError::parse(at, "at most two derivatives of a function symbol"));
            }
            if self.peek() == Some(&Tok::Op('(')) {
                self.pos += 1;
                let aat = self.at();
                match self.peek().cloned() {
                    Some(Tok::Name(c)) if l.coord_index(&c) == Some(l.funcs[f].arg) => self.pos += 1,
                    _ => return Err(ExprError::parse(aat, "function argument must be its declared coordinate")),
                }
                self.expect(')')?;
            }
            l.func_slot(f, primes)
        } else if let Some(j) = l.extras.iter().position(|e| e == n) {
            l.extra_slot(j)
        } else {
            return Err(ExprError::parse(at, format!("unknown symbol '{n}'")));
        };
        Ok(Expr::monomial(Key::unit(slot, 1), Coeff::one()))
    }

    fn exponential(&self, e: &Expr, at: usize) -> Result<Expr, ExprError> {
        let bad = || ExprError::parse(at, "exp argument must be a linear form in the coordinates");
        if e.has_denominator() {
            return Err(bad());
        }
        let l = self.layout;
        let mut key = Key::one();
        for (k, c) in e.numer().terms() {
            let entries: Vec<(usize, i32)> = k.entries().collect();
            let [(s, 1)] = entries.as_slice() else {
                return Err(bad());
            };
            if *s >= l.dim() {
                return Err(bad());
            }
            let w = c.mul(&Coeff::int(EXP_SCALE as i64));
            if !w.is_integer() {
                return Err(ExprError::parse(at, format!("exp weight denominator must divide {EXP_SCALE}")));
            }
            let w = w.to_big().to_integer().to_i32().ok_or_else(bad)?;
            key = key.with(l.exp_slot(*s), w);
        }
        Ok(Expr::monomial(key, Coeff::one()))
    }
}

/// Parse `s` against the symbols of `layout`.
pub fn parse(s: &str, layout: &Layout) -> Result<Expr, ExprError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(ExprError::parse(0, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, layout, end: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::parse(p.at(), "trailing input"));
    }
    Ok(e)
}

