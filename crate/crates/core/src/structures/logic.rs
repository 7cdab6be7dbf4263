//! Propositions over curvature conditions and hypothesis/consequence rows.

use std::fmt;

use super::engine::{Engine, Env, Grade, Ratio};
use super::rank;
use super::roter;
use super::venzi;
use crate::curvature::Name;
use super::texpr::{Sc, TExpr};
use super::{Certificate, Confidence, Status, Verdict, Witness};

#[derive(Clone, Debug)]
pub enum Claim {
    Zero(TExpr),
    /// `lhs = λ rhs` for some scalar field `λ`, improper included.
    Ratio(TExpr, TExpr),
    /// `lhs = λ rhs` with `λ - c` not identically zero.
    RatioAvoiding(TExpr, TExpr, Sc),
    /// `a = λ b` and `c = λ d` with the same `λ`, or neither.
    SameRatio([TExpr; 4]),
    /// Nonzero Venzi solutions exist, or the tensor vanishes.
    Venzi(Name),
    /// Scalar field not identically zero.
    Nonzero(Sc),
    Riemannian,
    QuasiEinstein,
    RicciSimple,
    Not(Box<Claim>),
    All(Vec<Claim>),
    Any(Vec<Claim>),
    Implies(Box<Claim>, Box<Claim>),
    Iff(Box<Claim>, Box<Claim>),
}

impl Claim {
    pub fn not(self) -> Claim {
        Claim::Not(Box::new(self))
    }

    pub fn implies(self, o: Claim) -> Claim {
        Claim::Implies(Box::new(self), Box::new(o))
    }

    pub fn iff(self, o: Claim) -> Claim {
        Claim::Iff(Box::new(self), Box::new(o))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub truth: Option<bool>,
    pub numeric: bool,
    pub witness: Option<Witness>,
    /// Residual whose nonzero component falsified an atom.
    pub residual: Option<TExpr>,
    /// Scalar whose nonvanishing decided the outcome.
    pub scalar: Option<Sc>,
    /// Tensor whose vanishing decided the outcome.
    pub vanished: Option<TExpr>,
    pub note: Option<String>,
}

impl Outcome {
    fn known(truth: bool, numeric: bool) -> Outcome {
        Outcome { truth: Some(truth), numeric, ..Outcome::default() }
    }

    fn unknown(note: impl Into<String>) -> Outcome {
        Outcome { note: Some(note.into()), ..Outcome::default() }
    }

    fn from_grade(g: Grade, residual: &TExpr, symbolic: bool) -> Outcome {
        match g {
            Grade::Zero { numeric } => Outcome { vanished: Some(residual.clone()), ..Outcome::known(true, numeric || !symbolic) },
            Grade::Nonzero(w) => Outcome { truth: Some(false), numeric: !symbolic, witness: Some(w), residual: Some(residual.clone()), ..Outcome::default() },
            Grade::Undecided(s) => Outcome::unknown(s),
        }
    }
}

pub fn evaluate(e: &Engine, c: &Claim, env: &Env) -> Outcome {
    let sym = e.symbolic();
    match c {
        Claim::Zero(t) => match e.eval(t, env) {
            Ok(v) => Outcome::from_grade(e.grade(&v), t, sym),
            Err(err) => Outcome::unknown(err.to_string()),
        },
        Claim::Ratio(a, b) => match ratio_of(e, a, b, env) {
            Ok(r) => ratio_outcome(r, sym),
            Err(o) => o,
        },
        Claim::RatioAvoiding(a, b, c) => match ratio_of(e, a, b, env) {
            Err(o) => o,
            Ok(Ratio::Holds { l, numeric, .. }) => match e.scalar(c, env).map(|v| e.grade_scalar(&e.scal_diff(&l, &v))) {
                Ok(Grade::Zero { .. }) => Outcome { note: Some(format!("extracted scalar equals {c}")), ..Outcome::known(false, numeric) },
                Ok(Grade::Nonzero(_)) => Outcome::known(true, numeric),
                Ok(Grade::Undecided(s)) => Outcome::unknown(s),
                Err(err) => Outcome::unknown(err.to_string()),
            },
            Ok(r) => ratio_outcome(r, sym),
        },
        Claim::SameRatio([a, b, c, d]) => {
            let r1 = match ratio_of(e, a, b, env) {
                Ok(r) => r,
                Err(o) => return o,
            };
            let r2 = match ratio_of(e, c, d, env) {
                Ok(r) => r,
                Err(o) => return o,
            };
            match (r1, r2) {
                (Ratio::Holds { l: l1, numeric: n1, .. }, Ratio::Holds { l: l2, numeric: n2, .. }) => match e.grade_scalar(&e.scal_diff(&l1, &l2)) {
                    Grade::Zero { numeric } => Outcome::known(true, n1 || n2 || numeric),
                    Grade::Nonzero(w) => Outcome { witness: Some(w), note: Some("scalars differ".into()), ..Outcome::known(false, !sym) },
                    Grade::Undecided(s) => Outcome::unknown(s),
                },
                (Ratio::Undecided(s), _) | (_, Ratio::Undecided(s)) => Outcome::unknown(s),
                (Ratio::Fails { .. }, Ratio::Fails { .. }) => Outcome::known(true, !sym),
                (Ratio::Fails { witness, note }, _) | (_, Ratio::Fails { witness, note }) => {
                    Outcome { witness: Some(witness), note: Some(note), ..Outcome::known(false, !sym) }
                }
                _ => Outcome::known(true, !sym),
            }
        }
        Claim::Venzi(d) => {
            let v = venzi::solve(e, *d).verdict;
            match v.status {
                Status::Unavailable | Status::NotApplicable => Outcome::unknown(v.note.unwrap_or_default()),
                _ => Outcome { witness: v.witness.clone(), ..Outcome::known(v.satisfied(), v.confidence == Confidence::Numeric) },
            }
        }
        Claim::Nonzero(s) => match e.scalar(s, env) {
            Ok(v) => match e.grade_scalar(&v) {
                Grade::Zero { numeric } => Outcome::known(false, numeric),
                Grade::Nonzero(w) => Outcome { witness: Some(w), scalar: Some(s.clone()), ..Outcome::known(true, !sym) },
                Grade::Undecided(s) => Outcome::unknown(s),
            },
            Err(err) => Outcome::unknown(err.to_string()),
        },
        Claim::Riemannian => match e.suite.chart().signature_survey(&e.plan) {
            Some(((_, neg), true)) => Outcome::known(neg == 0, true),
            Some((_, false)) => Outcome::unknown("signature changes across the sample"),
            None => Outcome::unknown("signature unavailable"),
        },
        Claim::QuasiEinstein => rank_outcome(rank::quasi_einstein(e)),
        Claim::RicciSimple => rank_outcome(rank::ricci_simple(e)),
        Claim::Not(a) => {
            let o = evaluate(e, a, env);
            let negated = o.truth == Some(true);
            Outcome {
                truth: o.truth.map(|t| !t),
                numeric: o.numeric,
                witness: if negated { o.witness } else { None },
                residual: None,
                scalar: if negated { o.scalar } else { None },
                vanished: if negated { o.vanished } else { None },
                note: o.note,
            }
        }
        Claim::All(cs) => {
            let mut numeric = false;
            let mut unknown = None;
            for c in cs {
                let o = evaluate(e, c, env);
                numeric |= o.numeric;
                match o.truth {
                    Some(false) => return o,
                    None => unknown = Some(o),
                    Some(true) => {}
                }
            }
            unknown.unwrap_or(Outcome::known(true, numeric))
        }
        Claim::Any(cs) => {
            let mut first_false = None;
            let mut unknown = None;
            for c in cs {
                let o = evaluate(e, c, env);
                match o.truth {
                    Some(true) => return o,
                    Some(false) => {
                        first_false.get_or_insert(o);
                    }
                    None => unknown = Some(o),
                }
            }
            unknown.or(first_false).unwrap_or(Outcome::known(false, false))
        }
        Claim::Implies(a, b) => {
            let oa = evaluate(e, a, env);
            match oa.truth {
                Some(false) => Outcome::known(true, oa.numeric),
                Some(true) => {
                    let mut ob = evaluate(e, b, env);
                    ob.numeric |= oa.numeric;
                    ob
                }
                None => oa,
            }
        }
        Claim::Iff(a, b) => {
            let oa = evaluate(e, a, env);
            let ob = evaluate(e, b, env);
            match (oa.truth, ob.truth) {
                (Some(x), Some(y)) if x == y => Outcome::known(true, oa.numeric || ob.numeric),
                (Some(x), Some(_)) => {
                    let mut o = if x { ob.clone() } else { oa.clone() };
                    o.truth = Some(false);
                    o.numeric = oa.numeric || ob.numeric;
                    o.note = Some(format!("left side {}, right side {}", word(x), word(!x)));
                    o
                }
                (None, _) => oa,
                _ => ob,
            }
        }
    }
}

fn ratio_of(e: &Engine, a: &TExpr, b: &TExpr, env: &Env) -> Result<Ratio, Outcome> {
    let x = e.eval(a, env).map_err(|err| Outcome::unknown(err.to_string()))?;
    let y = e.eval(b, env).map_err(|err| Outcome::unknown(err.to_string()))?;
    if let Some(msg) = super::engine::shape_mismatch(&x, &y) {
        return Err(Outcome::unknown(msg));
    }
    Ok(e.ratio(&x, &y))
}

fn ratio_outcome(r: Ratio, sym: bool) -> Outcome {
    match r {
        Ratio::Holds { numeric, .. } | Ratio::Improper { numeric } => Outcome::known(true, numeric),
        Ratio::Fails { witness, note } => Outcome { truth: Some(false), numeric: !sym, witness: Some(witness), residual: None, vanished: None, scalar: None, note: Some(note) },
        Ratio::Undecided(s) => Outcome::unknown(s),
    }
}

fn word(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn rank_outcome(r: rank::RankOutcome) -> Outcome {
    match r {
        rank::RankOutcome::Yes => Outcome::known(true, true),
        rank::RankOutcome::No(w) => Outcome { witness: Some(w), ..Outcome::known(false, true) },
        rank::RankOutcome::Unknown(s) => Outcome::unknown(s),
    }
}

/// Premise of a hypothesis/consequence row.
#[derive(Clone, Debug)]
pub enum Hypothesis {
    /// `lhs = L rhs`; binds `L`.
    Pseudo { label: String, lhs: TExpr, rhs: TExpr },
    /// A premise without bound scalars.
    Claim { label: String, claim: Claim },
    /// Roter type decomposition; binds `c1..c6`.
    Roter { generalized: bool },
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::Pseudo { label, .. } | Hypothesis::Claim { label, .. } => f.write_str(label),
            Hypothesis::Roter { generalized: false } => f.write_str("Roter type"),
            Hypothesis::Roter { generalized: true } => f.write_str("generalized Roter type"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Item {
    pub label: String,
    pub claim: Claim,
    /// Analysis attached to a certificate when the consequence fails.
    pub known: Option<&'static str>,
}

pub fn item(label: impl Into<String>, claim: Claim) -> Item {
    Item { label: label.into(), claim, known: None }
}

pub fn known(label: impl Into<String>, claim: Claim, analysis: &'static str) -> Item {
    Item { label: label.into(), claim, known: Some(analysis) }
}

#[derive(Clone, Debug)]
pub struct Theorem {
    pub hypothesis: Hypothesis,
    pub items: Vec<Item>,
}

/// Rows of one theorem: its premise and then each consequence.
pub fn run_theorem(e: &Engine, t: &Theorem) -> Vec<Verdict> {
    let head = format!("if {}", t.hypothesis);
    let (premise, env) = premise(e, &t.hypothesis);
    let mut out = Vec::with_capacity(t.items.len());
    for it in &t.items {
        let id = format!("{head} then {}", it.label);
        if !premise.status.holds() {
            let why = match premise.status {
                Status::Improper => "premise holds improperly, so L is undetermined".to_string(),
                Status::Unavailable => format!("premise unavailable: {}", premise.note.clone().unwrap_or_default()),
                _ => "premise fails".to_string(),
            };
            out.push(Verdict::new(id, Status::NotApplicable, premise.confidence).note(why));
            continue;
        }
        out.push(verdict_for(e, id, &it.claim, &env, it.known));
    }
    out
}

/// Verdict for a claim under bound variables, with a certificate for a known
/// failing statement.
pub fn verdict_for(e: &Engine, id: String, claim: &Claim, env: &Env, analysis: Option<&str>) -> Verdict {
    let o = evaluate(e, claim, env);
    let conf = if o.numeric || !e.symbolic() { Confidence::Numeric } else { Confidence::Symbolic };
    match o.truth {
        Some(true) => Verdict::holds(id, conf == Confidence::Numeric),
        None => Verdict::new(id, Status::Unavailable, conf).note(o.note.unwrap_or_default()),
        Some(false) => {
            let mut v = Verdict::new(id.clone(), Status::Fails, conf);
            if let Some(n) = &o.note {
                v = v.note(n.clone());
            }
            if let Some(w) = &o.witness {
                v = v.witness(w.clone());
            }
            if let Some(a) = analysis {
                v.certificate = Some(certificate(e, &id, &o, env, a));
            }
            v
        }
    }
}

/// Residual component and sampled values backing a failure.
pub fn certificate(e: &Engine, claim: &str, o: &Outcome, env: &Env, analysis: &str) -> Certificate {
    let mut residual = String::from("n/a");
    let mut evidence = Vec::new();
    if let (Some(t), Some(w)) = (&o.residual, &o.witness) {
        if e.symbolic() {
            if let Ok(x) = e.eval_exact(t, env) {
                residual = format!("{} = {}", super::engine::one_based(&w.index), e.render(x.get(&w.index)));
            }
        }
        if let Ok(xs) = e.eval_sampled(t, env) {
            evidence = xs.iter().zip(&e.points).take(3).map(|(x, (i, _))| (*i, x.get(&w.index).v)).collect();
        }
    } else if let (Some(sc), Some(w)) = (&o.scalar, &o.witness) {
        if e.symbolic() {
            if let Ok(x) = e.scalar(sc, env) {
                residual = format!("{sc} = {}", e.render_scal(&x));
            }
        }
        if let Ok(xs) = e.scalar_sampled(sc, env) {
            evidence = xs.iter().zip(&e.points).take(3).map(|(x, (i, _))| (*i, x.v)).collect();
        }
        if evidence.is_empty() {
            evidence.push((w.point, w.value));
        }
    } else if let Some(w) = &o.witness {
        residual = format!("{}", w);
        evidence.push((w.point, w.value));
    } else if let Some(t) = &o.vanished {
        residual = format!("{t} = 0 identically");
        if let Ok(xs) = e.eval_sampled(t, env) {
            evidence = xs.iter().zip(&e.points).take(3).map(|(x, (i, _))| (*i, x.data().iter().fold(0.0, |m: f64, a| m.max(a.v.abs())))).collect();
        }
    }
    Certificate { claim: claim.to_string(), residual, evidence, analysis: analysis.to_string() }
}

fn premise(e: &Engine, h: &Hypothesis) -> (Verdict, Env) {
    match h {
        Hypothesis::Pseudo { label, lhs, rhs } => {
            let v = e.check_ratio(label.clone(), lhs, rhs, &Env::none());
            let env = match &v.scalar {
                Some(l) => Env::with(0, l.clone()),
                None => Env::none(),
            };
            (v, env)
        }
        Hypothesis::Claim { label, claim } => (verdict_for(e, label.clone(), claim, &Env::none(), None), Env::none()),
        Hypothesis::Roter { generalized } => {
            let r = roter::solve(e, *generalized);
            let mut env = Env::none();
            if let Some(cs) = &r.coefficients {
                for (i, c) in cs.iter().enumerate() {
                    env.set(i + 1, c.clone());
                }
            }
            (r.verdict, env)
        }
    }
}
