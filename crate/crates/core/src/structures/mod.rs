//! Classification of curvature conditions of pseudosymmetry type.

pub mod catalog;
pub mod condition;
pub mod engine;
pub mod logic;
pub mod published;
pub mod rank;
pub mod report;
pub mod roter;
pub mod texpr;
pub mod venzi;

use std::fmt;

pub use engine::{Engine, Env, Grade, Options, Ratio, Scal, Val};
pub use texpr::{EvalError, Sc, TExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    HoldsSymbolic,
    HoldsNumeric,
    Fails,
    /// Both sides vanish, so no scalar is determined.
    Improper,
    /// A premise does not hold.
    NotApplicable,
    /// An input could not be computed.
    Unavailable,
}

impl Status {
    pub fn holds(&self) -> bool {
        matches!(self, Status::HoldsSymbolic | Status::HoldsNumeric)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::HoldsSymbolic | Status::HoldsNumeric => "Holds",
            Status::Fails => "Fails",
            Status::Improper => "Improper",
            Status::NotApplicable => "N/A",
            Status::Unavailable => "Unavailable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    Symbolic,
    Numeric,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Symbolic => "symbolic",
            Confidence::Numeric => "numeric",
        })
    }
}

/// Component and sample point where a residual is visibly nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Zero-based component index.
    pub index: Vec<usize>,
    /// Index into the sample plan.
    pub point: usize,
    pub coords: Vec<f64>,
    pub value: f64,
    pub relative: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| format!("{x:.4}")).collect();
        write!(f, "{} at point {} ({}) = {:.6e}", engine::one_based(&self.index), self.point, c.join(","), self.value)
    }
}

/// Evidence that a published statement disagrees with the computation.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub claim: String,
    /// Rendered nonzero residual component.
    pub residual: String,
    /// `(plan point, value)` at three sample points.
    pub evidence: Vec<(usize, f64)>,
    pub analysis: String,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: String,
    pub status: Status,
    pub confidence: Confidence,
    pub witness: Option<Witness>,
    pub value: Option<String>,
    /// Extracted scalar, when there is one.
    pub scalar: Option<Scal>,
    pub note: Option<String>,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn new(id: impl Into<String>, status: Status, confidence: Confidence) -> Verdict {
        Verdict { id: id.into(), status, confidence, witness: None, value: None, scalar: None, note: None, certificate: None }
    }

    pub fn holds(id: impl Into<String>, numeric: bool) -> Verdict {
        if numeric {
            Verdict::new(id, Status::HoldsNumeric, Confidence::Numeric)
        } else {
            Verdict::new(id, Status::HoldsSymbolic, Confidence::Symbolic)
        }
    }

    pub fn witness(mut self, w: Witness) -> Verdict {
        self.witness = Some(w);
        self
    }

    pub fn value(mut self, v: impl Into<String>) -> Verdict {
        self.value = Some(v.into());
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Verdict {
        self.note = Some(n.into());
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Verdict {
        self.id = id.into();
        self
    }

    /// Holds, or is improper (both sides vanish).
    pub fn satisfied(&self) -> bool {
        self.status.holds() || self.status == Status::Improper
    }
}
