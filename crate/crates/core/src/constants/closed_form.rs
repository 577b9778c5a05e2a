//! Closed-form projection constants and reference curves.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Projection constant of `P_m(ℓ_2^n)` (Ryll–Wojtaszczyk):
/// `Γ(n+m)Γ(1+m/2) / (Γ(1+m)Γ(n+m/2))`.
pub fn rw_projection_constant(m: u32, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (ln_gamma(n + m) + ln_gamma(1.0 + m / 2.0) - ln_gamma(1.0 + m) - ln_gamma(n + m / 2.0)).exp()
}

/// Kadets–Snobar bound `√dim`.
pub fn kadets_snobar(dim: f64) -> f64 {
    dim.sqrt()
}

/// Dirichlet kernel `D_m(t) = sin((m+½)t)/sin(t/2)`.
fn dirichlet(m: u32, t: f64) -> f64 {
    let half = 0.5 * t;
    if half.sin().abs() < 1e-8 {
        // 1 + 2 Σ cos(kt) near the origin
        return 1.0 + 2.0 * (1..=m).map(|k| (k as f64 * t).cos()).sum::<f64>();
    }
    ((m as f64 + 0.5) * t).sin() / half.sin()
}

/// Lebesgue constant `(1/2π) ∫_{−π}^{π} |D_m(t)| dt` of the degree-`m`
/// Fourier partial sum, the norm of the minimal projection onto
/// trigonometric polynomials of degree at most `m`.
///
/// The kernel is smooth between its zeros `2πj/(2m+1)`, so each piece gets a
/// fixed Gauss–Legendre rule.
pub fn lebesgue_constant(m: u32) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let (x, w) = gauss_legendre(24);
    let step = 2.0 * PI / (2 * m + 1) as f64;
    let mut knots: Vec<f64> = (0..=m).map(|j| j as f64 * step).collect();
    knots.push(PI);
    let mut total = 0.0;
    for pair in knots.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let piece: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * dirichlet(m, a + half * (xi + 1.0)).abs()).sum();
        total += half * piece;
    }
    total / PI
}

/// Named reference curves for Bohr radii and homogeneous radii.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceCurve {
    /// `√(log n / n)`.
    SqrtLognOverN,
    /// `(log n / n)^{1−1/r}`.
    LognOverNPow { r: f64 },
    /// `(log n)^{1−1/s} / n^{1−1/r}`.
    LogpowOverNpow { r: f64, s: f64 },
    /// `(m/(n+m))^{(m−1)/2m}`.
    KmTwoConvex { m: u32 },
}

impl ReferenceCurve {
    /// Parses a curve name with its parameters.
    pub fn from_name(name: &str, r: Option<f64>, s: Option<f64>, m: Option<u32>) -> Result<Self> {
        let need = |v: Option<f64>, what: &str| v.ok_or_else(|| Error::InvalidArgument(format!("curve {name} needs {what}")));
        match name {
            "sqrt_logn_over_n" => Ok(ReferenceCurve::SqrtLognOverN),
            "logn_over_n_pow" => Ok(ReferenceCurve::LognOverNPow { r: need(r, "r")? }),
            "logpow_over_npow" => Ok(ReferenceCurve::LogpowOverNpow { r: need(r, "r")?, s: need(s, "s")? }),
            "km_two_convex" => Ok(ReferenceCurve::KmTwoConvex {
                m: m.ok_or_else(|| Error::InvalidArgument("curve km_two_convex needs m".into()))?,
            }),
            other => Err(Error::UnknownCurve(other.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReferenceCurve::SqrtLognOverN => "sqrt_logn_over_n",
            ReferenceCurve::LognOverNPow { .. } => "logn_over_n_pow",
            ReferenceCurve::LogpowOverNpow { .. } => "logpow_over_npow",
            ReferenceCurve::KmTwoConvex { .. } => "km_two_convex",
        }
    }
}

/// Evaluates a reference curve at dimension `n` (natural logarithms).
pub fn reference_asymptotic(curve: &ReferenceCurve, n: f64) -> f64 {
    let conj_inv = |r: f64| 1.0 - 1.0 / r;
    match *curve {
        ReferenceCurve::SqrtLognOverN => (n.ln() / n).sqrt(),
        ReferenceCurve::LognOverNPow { r } => (n.ln() / n).powf(conj_inv(r)),
        ReferenceCurve::LogpowOverNpow { r, s } => n.ln().powf(conj_inv(s)) / n.powf(conj_inv(r)),
        ReferenceCurve::KmTwoConvex { m } => {
            let m = m as f64;
            (m / (n + m)).powf((m - 1.0) / (2.0 * m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rw_values() {
        assert!((rw_projection_constant(2, 2) - 1.5).abs() < 1e-12);
        assert!((rw_projection_constant(1, 1) - 1.0).abs() < 1e-12);
        // m = 1 is the projection constant of ℓ_2^n
        let n = 5.0f64;
        let direct = (ln_gamma(n + 1.0) + ln_gamma(1.5) - ln_gamma(n + 0.5)).exp();
        assert!((rw_projection_constant(1, 5) - direct).abs() < 1e-12);
    }

    #[test]
    fn kadets_snobar_values() {
        assert_eq!(kadets_snobar(4.0), 2.0);
        assert_eq!(kadets_snobar(1.0), 1.0);
        assert!((kadets_snobar(6.0) - 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lebesgue_small_degrees() {
        assert_eq!(lebesgue_constant(0), 1.0);
        assert!((lebesgue_constant(1) - 1.4359911).abs() < 1e-7);
        // brute-force midpoint oracle
        let m = 3;
        let k = 2_000_000;
        let h = 2.0 * PI / k as f64;
        let brute: f64 = (0..k).map(|i| dirichlet(m, -PI + (i as f64 + 0.5) * h).abs()).sum::<f64>() * h / (2.0 * PI);
        assert!((lebesgue_constant(m) - brute).abs() < 1e-8);
    }

    #[test]
    fn reference_curves() {
        let e2 = std::f64::consts::E.powi(2);
        assert!((reference_asymptotic(&ReferenceCurve::SqrtLognOverN, e2) - 2f64.sqrt() / std::f64::consts::E).abs() < 1e-12);
        assert_eq!(reference_asymptotic(&ReferenceCurve::KmTwoConvex { m: 1 }, 37.0), 1.0);
        let v = reference_asymptotic(&ReferenceCurve::LognOverNPow { r: 2.0 }, 16.0);
        assert!((v - 0.4163).abs() < 1e-4);
        assert!(ReferenceCurve::from_name("nope", None, None, None).is_err());
    }
}
