//! Headline constants as certified brackets: polynomial projection constants,
//! unconditional basis constants of monomials, homogeneous and full Bohr
//! radii, closed-form projection constants and the Lorentz bound suite.

mod bohr;
mod chi_mon;
mod closed_form;
mod lambda_hat;
mod lorentz;

use serde::Serialize;

use crate::bracket::Bracket;
use crate::lattice::LatticeSpec;
use crate::multiindex::IndexSetSpec;

pub use bohr::{bohr_bracket, bohr_report, default_m_max, k_m_bracket, k_m_report, mobius_upper};
pub use chi_mon::{chi_mon_bracket, chi_mon_report, chi_mon_upper};
pub use closed_form::{kadets_snobar, lebesgue_constant, reference_asymptotic, rw_projection_constant, ReferenceCurve};
pub use lambda_hat::{lambda_hat, lambda_hat_report, lambda_hat_upper};
pub use lorentz::{lorentz_bound_suite, LorentzInstance, LorentzReport, PointwiseCheck};

/// Which constant a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    LambdaHat,
    ChiMon,
    #[serde(rename = "K_m")]
    KM,
    Bohr,
    ProjClosed,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::LambdaHat => "lambda_hat",
            Quantity::ChiMon => "chi_mon",
            Quantity::KM => "K_m",
            Quantity::Bohr => "bohr",
            Quantity::ProjClosed => "proj_closed",
        }
    }
}

/// Whether a chain entry bounds the quantity from above or below, or only
/// one summand of it (a single degree of a non-homogeneous set).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upper,
    Lower,
    Term,
}

/// One named bound that entered a bracket.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainEntry {
    pub name: String,
    pub value: f64,
    pub side: Side,
}

impl ChainEntry {
    pub fn upper(name: impl Into<String>, value: f64) -> Self {
        ChainEntry { name: name.into(), value, side: Side::Upper }
    }

    pub fn lower(name: impl Into<String>, value: f64) -> Self {
        ChainEntry { name: name.into(), value, side: Side::Lower }
    }

    /// Upper bound for one summand of the quantity.
    pub fn term(name: impl Into<String>, value: f64) -> Self {
        ChainEntry { name: name.into(), value, side: Side::Term }
    }
}

/// A bracket together with the instance and the bounds that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport {
    pub quantity: Quantity,
    pub index_set: IndexSetSpec,
    pub lattice: LatticeSpec,
    /// Degree parameter (`m`, or `m_max` for Bohr radii).
    pub m: u32,
    pub bracket: Bracket,
    pub chain: Vec<ChainEntry>,
    /// The infimum over degrees was cut at `m` below the degree of the set.
    pub truncated: bool,
}

/// Column names of [`ConstantReport::csv_row`].
pub const CSV_HEADER: [&str; 14] =
    ["quantity", "n", "m", "family", "p", "q", "J_generator", "lo", "hi", "method", "chain", "seed", "evals", "wall_ms"];

fn fmt_exponent(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

impl ConstantReport {
    /// `lo` never exceeds an upper chain entry.
    pub fn is_consistent(&self) -> bool {
        self.bracket.is_valid()
            && self
                .chain
                .iter()
                .filter(|c| c.side == Side::Upper)
                .all(|c| self.bracket.lo <= c.value + 1e-9 * (1.0 + c.value.abs()))
    }

    /// Chain rendered as `name=value` pairs joined by semicolons.
    pub fn chain_string(&self) -> String {
        self.chain.iter().map(|c| format!("{}={:.12e}", c.name, c.value)).collect::<Vec<_>>().join(";")
    }

    /// One CSV row in [`CSV_HEADER`] order.
    pub fn csv_row(&self, seed: u64, wall_ms: u64) -> Vec<String> {
        let (p, q) = self.lattice.exponents();
        vec![
            self.quantity.as_str().into(),
            self.lattice.dimension().to_string(),
            self.m.to_string(),
            self.lattice.family().name().into(),
            fmt_exponent(p),
            fmt_exponent(q),
            self.index_set.label(),
            format!("{:.12e}", self.bracket.lo),
            format!("{:.12e}", self.bracket.hi),
            self.bracket.method.clone(),
            self.chain_string(),
            seed.to_string(),
            self.bracket.evaluations.to_string(),
            wall_ms.to_string(),
        ]
    }
}

/// Picks the smallest upper entry, returning its value and name.
pub(crate) fn best_upper(chain: &[ChainEntry]) -> (f64, String) {
    chain.iter().filter(|c| c.side == Side::Upper && c.value.is_finite()).fold((f64::INFINITY, String::new()), |acc, c| {
        if c.value < acc.0 {
            (c.value, c.name.clone())
        } else {
            acc
        }
    })
}

/// Picks the largest lower entry, returning its value and name.
pub(crate) fn best_lower(chain: &[ChainEntry]) -> (f64, String) {
    chain.iter().filter(|c| c.side == Side::Lower && c.value.is_finite()).fold((f64::NEG_INFINITY, String::new()), |acc, c| {
        if c.value > acc.0 {
            (c.value, c.name.clone())
        } else {
            acc
        }
    })
}
