//! Symbolic scalar fields.
//!
//! An [`Expr`] is a quotient `N / (a_1^k_1 ... a_r^k_r)`. `N` and the atoms
//! `a_i` are finite sums of rational multiples of extended monomials: Laurent
//! products of coordinates, parameters and function symbols `f, f', f''`
//! times one `exp` of a rational linear form in the coordinates. Atoms are
//! normalized to leading term `1`, so they are unique up to reordering and
//! numerator divisibility is checked exactly.

mod calc;
mod coeff;
mod layout;
mod parse;
mod poly;
mod quot;
mod render;
mod zero;

pub use calc::{eval_poly_f64, Assignment, FloatPoint, Value};
pub use coeff::Coeff;
pub use layout::{FuncSym, Layout, ParamSym, Slot, EXP_SCALE};
pub use parse::parse;
pub use poly::{Key, Poly};
pub use quot::Expr;
pub use render::{render, render_poly};
pub use zero::{is_zero, Domain, SamplePlan, Witness, ZeroVerdict, BATCHES, BATCH_SIZE, DEFAULT_TOLERANCE};

#[cfg(test)]
pub(crate) use calc::rational;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("derivative of {0}'' is not representable")]
    DerivativeOrder(String),
    #[error("expression has a pole at the evaluation point")]
    Pole,
}

impl ExprError {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> ExprError {
        ExprError::Parse { pos, msg: msg.into() }
    }
}

#[cfg(test)]
mod tests;
