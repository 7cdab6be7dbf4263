//! The condition mini-language: `P.calS = 0`, `R.R = L*Q(g,R)`, `P.S = R.S`.

use thiserror::Error;

use crate::curvature::Name;
use crate::tensor::Valence;

use super::engine::{Engine, Env};
use super::texpr::{act, diff, named, q, TExpr};
use super::Verdict;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ConditionError {
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("valence mismatch: {0}")]
    Valence(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Side {
    Zero,
    Named(Name),
    Action(Name, Name),
    Q(Name, Name),
    /// `L*Q(A,H)`
    Scaled(Name, Name),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub lhs: Side,
    pub rhs: Side,
}

pub fn valence_of(n: Name) -> Valence {
    match n {
        Name::Kappa | Name::Kappa2 => Valence::new(0, 0),
        Name::GradKappa => Valence::new(0, 1),
        Name::Metric | Name::S | Name::S2 | Name::E | Name::Z => Valence::new(0, 2),
        Name::InverseMetric => Valence::new(2, 0),
        Name::Gamma => Valence::new(1, 2),
        Name::CalS => Valence::new(1, 1),
        Name::GradS => Valence::new(0, 3),
        Name::R | Name::G | Name::C | Name::W | Name::K | Name::P | Name::WedgeS => Valence::new(0, 4),
        Name::CalR | Name::CalG | Name::CalC | Name::CalW | Name::CalK | Name::CalP => Valence::new(1, 3),
        Name::GradR | Name::GradP => Valence::new(0, 5),
    }
}

fn extended(v: Valence) -> Valence {
    Valence::new(v.contra, v.co + 2)
}

impl Side {
    fn valence(&self) -> Result<Option<Valence>, ConditionError> {
        Ok(match self {
            Side::Zero => None,
            Side::Named(n) => Some(valence_of(*n)),
            Side::Action(d, h) => {
                if valence_of(*d) != Valence::new(0, 4) {
                    return Err(ConditionError::Valence(format!("{d} is not a (0,4) tensor and cannot act")));
                }
                Some(extended(target(*h)?))
            }
            Side::Q(a, h) | Side::Scaled(a, h) => {
                if valence_of(*a) != Valence::new(0, 2) {
                    return Err(ConditionError::Valence(format!("{a} is not a (0,2) tensor")));
                }
                Some(extended(target(*h)?))
            }
        })
    }

    pub fn texpr(&self) -> Option<TExpr> {
        match self {
            Side::Zero => None,
            Side::Named(n) => Some(named(*n)),
            Side::Action(d, h) => Some(act(named(*d), named(*h))),
            Side::Q(a, h) | Side::Scaled(a, h) => Some(q(named(*a), named(*h))),
        }
    }
}

fn target(h: Name) -> Result<Valence, ConditionError> {
    let v = valence_of(h);
    if v.contra > 1 || v.rank() == 0 {
        return Err(ConditionError::Valence(format!("{h} cannot be acted on")));
    }
    Ok(v)
}

struct Lexer<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.s[self.pos..].chars().next().map(char::len_utf8).unwrap_or(1);
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ConditionError> {
        Err(ConditionError::Parse { col: self.pos + 1, msg: msg.into() })
    }

    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.s[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ConditionError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn word(&mut self) -> Result<&'a str, ConditionError> {
        self.skip();
        let rest = &self.s[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected a name");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn name(&mut self) -> Result<Name, ConditionError> {
        let start = self.pos;
        let w = self.word()?;
        w.parse::<Name>().map_err(|m| ConditionError::Parse { col: start + 1, msg: m })
    }

    fn q_args(&mut self) -> Result<(Name, Name), ConditionError> {
        self.expect('(')?;
        let a = self.name()?;
        self.expect(',')?;
        let h = self.name()?;
        self.expect(')')?;
        Ok((a, h))
    }

    fn side(&mut self) -> Result<Side, ConditionError> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(Side::Zero)
            }
            None => self.err("unexpected end of input"),
            _ => {
                let start = self.pos;
                let w = self.word()?;
                match w {
                    "L" => {
                        self.expect('*')?;
                        let start = self.pos;
                        if self.word()? != "Q" {
                            self.pos = start;
                            return self.err("expected Q(A,H) after L*");
                        }
                        let (a, h) = self.q_args()?;
                        Ok(Side::Scaled(a, h))
                    }
                    "Q" if self.peek() == Some('(') => {
                        let (a, h) = self.q_args()?;
                        Ok(Side::Q(a, h))
                    }
                    _ => {
                        let d = w.parse::<Name>().map_err(|m| ConditionError::Parse { col: start + 1, msg: m })?;
                        if self.eat('.') {
                            Ok(Side::Action(d, self.name()?))
                        } else {
                            Ok(Side::Named(d))
                        }
                    }
                }
            }
        }
    }
}

pub fn parse(s: &str) -> Result<Condition, ConditionError> {
    let mut lx = Lexer { s, pos: 0 };
    let lhs = lx.side()?;
    lx.expect('=')?;
    let rhs = lx.side()?;
    if lx.peek().is_some() {
        return lx.err("trailing input");
    }
    let c = Condition { lhs, rhs };
    c.validate()?;
    Ok(c)
}

impl Condition {
    fn validate(&self) -> Result<(), ConditionError> {
        let (a, b) = (self.lhs.valence()?, self.rhs.valence()?);
        match (a, b) {
            (None, None) => Err(ConditionError::Valence("both sides are 0".into())),
            (Some(x), Some(y)) if x != y => Err(ConditionError::Valence(format!("left side is ({},{}), right side is ({},{})", x.contra, x.co, y.contra, y.co))),
            _ => {
                if matches!(self.lhs, Side::Scaled(..)) && matches!(self.rhs, Side::Scaled(..)) {
                    return Err(ConditionError::Parse { col: 1, msg: "L may appear on one side only".into() });
                }
                Ok(())
            }
        }
    }

    /// Canonical check id, without whitespace.
    pub fn id(&self) -> String {
        format!("{}={}", show(&self.lhs), show(&self.rhs))
    }

    pub fn run(&self, e: &Engine) -> Verdict {
        let id = self.id();
        let (x, y) = match (&self.lhs, &self.rhs) {
            (Side::Scaled(..), other) => (other, &self.lhs),
            (a, b) => (a, b),
        };
        match (x.texpr(), y) {
            (Some(lhs), Side::Scaled(..)) => e.check_ratio(id, &lhs, &y.texpr().expect("nonzero side"), &Env::none()),
            (None, Side::Scaled(..)) => e.check_zero(id, &y.texpr().expect("nonzero side"), &Env::none()),
            (Some(lhs), Side::Zero) => e.check_zero(id, &lhs, &Env::none()),
            (None, _) => e.check_zero(id, &y.texpr().expect("nonzero side"), &Env::none()),
            (Some(lhs), _) => e.check_zero(id, &diff(lhs, y.texpr().expect("nonzero side")), &Env::none()),
        }
    }
}

fn show(s: &Side) -> String {
    match s {
        Side::Zero => "0".into(),
        Side::Named(n) => n.to_string(),
        Side::Action(d, h) => format!("{d}.{h}"),
        Side::Q(a, h) => format!("Q({a},{h})"),
        Side::Scaled(a, h) => format!("L*Q({a},{h})"),
    }
}
