//! Seeded sampling plans and the scalar zero-test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::calc::{rational, Assignment, FloatPoint};
use super::layout::Layout;
use super::quot::Expr;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const BATCHES: usize = 5;
pub const BATCH_SIZE: usize = 12;

const GRID: i64 = 997;

/// Deterministic sample points for one chart.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub exact: Vec<Assignment>,
    pub float: Vec<FloatPoint>,
    pub tolerance: f64,
    pub seed: u64,
}

/// Optional open interval per coordinate. Coordinates without a range are
/// sampled with magnitude in `[1/7, 3]` and random sign.
#[derive(Clone, Debug, Default)]
pub struct Domain {
    pub ranges: Vec<Option<(f64, f64)>>,
}

fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (i64, i64) {
    let a = (lo * GRID as f64).ceil() as i64 + 1;
    let b = ((hi * GRID as f64).floor() as i64 - 1).max(a);
    (rng.gen_range(a..=b), GRID)
}

impl SamplePlan {
    pub fn new(l: &Layout, dom: &Domain, seed: u64, tolerance: f64) -> SamplePlan {
        SamplePlan::with_size(l, dom, seed, tolerance, BATCHES * BATCH_SIZE)
    }

    pub fn with_size(l: &Layout, dom: &Domain, seed: u64, tolerance: f64, count: usize) -> SamplePlan {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut exact = Vec::with_capacity(count);
        for _ in 0..count {
            let coords = (0..l.dim())
                .map(|i| match dom.ranges.get(i).copied().flatten() {
                    Some((lo, hi)) => {
                        let (n, d) = draw(&mut rng, lo, hi);
                        rational(n, d)
                    }
                    None => {
                        let (n, d) = draw(&mut rng, 1.0 / 7.0, 3.0);
                        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                        rational(s * n, d)
                    }
                })
                .collect();
            let params = (0..l.params.len())
                .map(|_| {
                    let (n, d) = draw(&mut rng, 0.2, 4.0);
                    rational(n, d)
                })
                .collect();
            let funcs = (0..l.funcs.len())
                .map(|_| {
                    let mut v = Vec::with_capacity(3);
                    for o in 0..3 {
                        let (n, d) = draw(&mut rng, 0.2, 4.0);
                        let s = if o > 0 && rng.gen_bool(0.5) { -1 } else { 1 };
                        v.push(rational(s * n, d));
                    }
                    [v[0].clone(), v[1].clone(), v[2].clone()]
                })
                .collect();
            exact.push(Assignment { coords, params, funcs });
        }
        let float = exact.iter().map(|a| a.to_float(l)).collect();
        SamplePlan { exact, float, tolerance, seed }
    }

    pub fn len(&self) -> usize {
        self.float.len()
    }

    pub fn is_empty(&self) -> bool {
        self.float.is_empty()
    }
}

/// A point where an expression is visibly nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub point: usize,
    pub value: f64,
    /// `|numerator| / (1 + largest numerator term)`.
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroVerdict {
    ZeroSymbolic,
    ZeroNumeric,
    Nonzero(Witness),
    /// Every sample point hit a pole.
    Indeterminate,
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroVerdict::ZeroSymbolic | ZeroVerdict::ZeroNumeric)
    }
}

/// Decide whether `e` vanishes identically.
pub fn is_zero(e: &Expr, plan: &SamplePlan) -> ZeroVerdict {
    if e.is_zero() {
        return ZeroVerdict::ZeroSymbolic;
    }
    let mut usable = 0;
    for (i, pt) in plan.float.iter().enumerate() {
        let (n, nm, d) = e.eval_parts(pt);
        if !d.is_finite() || d.abs() < 1e-12 || !n.is_finite() {
            continue;
        }
        usable += 1;
        let rel = n.abs() / (1.0 + nm);
        if rel >= plan.tolerance {
            return ZeroVerdict::Nonzero(Witness { point: i, value: n / d, relative: rel });
        }
    }
    if usable == 0 {
        ZeroVerdict::Indeterminate
    } else {
        ZeroVerdict::ZeroNumeric
    }
}
