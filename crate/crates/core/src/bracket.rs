//! Certified numeric intervals and optimizer budgets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A certified interval `[lo, hi]` for a quantity without closed form.
///
/// `lo` is attained at a recorded witness (or follows from an attained
/// value by exact arithmetic) and `hi` is a proven bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub method: String,
    pub evaluations: u64,
    #[serde(skip)]
    pub witness: Option<Vec<Complex64>>,
}

impl Bracket {
    /// Builds a bracket. A lower end exceeding the upper end by rounding
    /// noise only is absorbed into the upper end.
    pub fn new(lo: f64, hi: f64, method: impl Into<String>, evaluations: u64) -> Self {
        let mut hi = hi;
        if lo > hi && lo - hi <= 1e-9 * (1.0 + hi.abs()) {
            hi = lo;
        }
        Bracket { lo, hi, method: method.into(), evaluations, witness: None }
    }

    /// Degenerate bracket for an exactly known value.
    pub fn exact(value: f64, method: impl Into<String>) -> Self {
        Bracket::new(value, value, method, 0)
    }

    pub fn with_witness(mut self, witness: Vec<Complex64>) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// True when `x` lies in the bracket widened by `tol` on both sides.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }
}

/// Search budget for multi-start optimizers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub restarts: usize,
    pub iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { restarts: 64, iterations: 500, tolerance: 1e-8, seed: 0 }
    }
}

impl Budget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    /// Scales restarts and iterations by `factor`, keeping at least one of each.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.restarts = ((self.restarts as f64 * factor).round() as usize).max(1);
        self.iterations = ((self.iterations as f64 * factor).round() as usize).max(1);
        self
    }
}

/// Derives an independent stream seed from a base seed and a stream index.
pub(crate) fn stream_seed(seed: u64, stream: u64) -> u64 {
    let mut x = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
