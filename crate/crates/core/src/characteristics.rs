//! Characteristics `c_X(α) = 1/sup_{z∈B_X} |z^α|`.
//!
//! By symmetry and 1-unconditionality the supremum is taken over
//! nonnegative vectors supported on `supp(α)` and ordered like `α`. On such
//! vectors every lattice norm of the crate has the form
//! `‖z‖^q = Σ_k w_k z_k^q` (or `max_k w_k z_k` for `q = ∞`), so with
//! `y_k = z_k^q` the problem `max Σ a_k log y_k` subject to `Σ w_k y_k ≤ 1`
//! and `y` decreasing is concave with linear constraints. Its maximizer is
//! given by pooling adjacent blocks (least concave majorant of the cumulative
//! sums), and a first-order certificate turns the computed point into a proven
//! upper bound.

use serde::{Deserialize, Serialize};

use crate::bracket::Bracket;
use crate::error::{Error, Result};
use crate::lattice::{conjugate, Family, LatticeSpec};
use crate::multiindex::MultiIndex;

/// `(m^m/α^α)^{1/r}` with `0^0 = 1`; equals 1 for `r = ∞` and for `α = 0`.
pub fn char_closed_lp(alpha: &MultiIndex, r: f64) -> f64 {
    if alpha.is_zero() || r.is_infinite() {
        return 1.0;
    }
    (ln_mm_over_aa(alpha) / r).exp()
}

/// `ln(m^m/α^α)`.
pub fn ln_mm_over_aa(alpha: &MultiIndex) -> f64 {
    let m = alpha.order() as f64;
    if m == 0.0 {
        return 0.0;
    }
    m * m.ln() - alpha.exponents().iter().filter(|&&a| a > 0).map(|&a| a as f64 * (a as f64).ln()).sum::<f64>()
}

/// Solution of the log-domain problem for one multi-index.
#[derive(Clone, Debug)]
pub struct LogSup {
    /// `ln z^α` at the feasible point `point`.
    pub attained: f64,
    /// Proven upper bound for `ln sup_{B_X} |z^α|`.
    pub upper: f64,
    /// A maximizer with `‖point‖_X = 1` (up to rounding, scaled to be feasible).
    pub point: Vec<f64>,
}

/// Solves `max ln z^α` over the positive part of `B_X`.
///
/// # Panics
/// Panics if the lengths of `alpha` and the lattice differ.
pub fn log_sup_monomial(alpha: &MultiIndex, x: &LatticeSpec) -> LogSup {
    assert_eq!(alpha.dimension(), x.dimension(), "dimension mismatch");
    let n = x.dimension();
    let mut order: Vec<usize> = alpha.support().collect();
    order.sort_by(|&i, &j| alpha.exponents()[j].cmp(&alpha.exponents()[i]).then(i.cmp(&j)));
    if order.is_empty() {
        return LogSup { attained: 0.0, upper: 0.0, point: vec![0.0; n] };
    }
    let a: Vec<f64> = order.iter().map(|&i| alpha.exponents()[i] as f64).collect();
    let ev = x.evaluator();
    let q = ev.power();
    let (decreasing, upper) = if q.is_infinite() {
        // constraints z_k ≤ 1/w_k, met simultaneously by a decreasing vector
        let z: Vec<f64> = ev.weights()[..a.len()].iter().map(|w| 1.0 / w).collect();
        let upper = a.iter().zip(&z).map(|(ak, zk)| ak * zk.ln()).sum();
        (z, upper)
    } else {
        let (y, upper_y) = pooled_maximizer(&a, &ev.weights()[..a.len()]);
        let z: Vec<f64> = y.iter().map(|v| v.powf(1.0 / q)).collect();
        (z, upper_y / q)
    };
    let mut point = vec![0.0; n];
    for (k, &i) in order.iter().enumerate() {
        point[i] = decreasing[k];
    }
    let nz = ev.norm_abs(&point);
    for v in point.iter_mut() {
        *v /= nz;
    }
    let attained = alpha.exponents().iter().zip(&point).filter(|(&e, _)| e > 0).map(|(&e, &z)| e as f64 * z.ln()).sum::<f64>();
    let slack = 1e-13 * (1.0 + upper.abs() + alpha.order() as f64);
    LogSup { attained, upper: upper.max(attained) + slack, point }
}

/// Maximizes `Σ a_k ln y_k` subject to `Σ w_k y_k ≤ 1` and `y` decreasing,
/// for decreasing positive `a`. Returns the maximizer and a certified upper
/// bound for the optimal value.
fn pooled_maximizer(a: &[f64], w: &[f64]) -> (Vec<f64>, f64) {
    let m: f64 = a.iter().sum();
    // blocks (start, sum_a, sum_w) with strictly decreasing ratios
    let mut blocks: Vec<(usize, f64, f64)> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let mut cur = (k, a[k], w[k]);
        while let Some(&(s, pa, pw)) = blocks.last() {
            if pa / pw <= cur.1 / cur.2 {
                cur = (s, pa + cur.1, pw + cur.2);
                blocks.pop();
            } else {
                break;
            }
        }
        blocks.push(cur);
    }
    let mut y = vec![0.0; a.len()];
    for (b, &(start, sa, sw)) in blocks.iter().enumerate() {
        let end = blocks.get(b + 1).map_or(a.len(), |nb| nb.0);
        let v = sa / (m * sw);
        y[start..end].iter_mut().for_each(|t| *t = v);
    }
    // For feasible y: f(y) ≤ f(ŷ) + m(1 − Σwŷ) − Σ gŷ + max(0, max_j G_j)·y_1,
    // with g_k = a_k/ŷ_k − m w_k, G_j its partial sums and y_1 ≤ 1/w_1.
    let f_hat: f64 = a.iter().zip(&y).map(|(ak, yk)| ak * yk.ln()).sum();
    let budget: f64 = w.iter().zip(&y).map(|(wk, yk)| wk * yk).sum();
    let mut partial = 0.0;
    let mut g_dot = 0.0;
    let mut peak: f64 = 0.0;
    for k in 0..a.len() {
        let g = a[k] / y[k] - m * w[k];
        partial += g;
        g_dot += g * y[k];
        peak = peak.max(partial);
    }
    let upper = f_hat + m * (1.0 - budget) - g_dot + peak / w[0];
    (y, upper)
}

/// Certified bracket for `c_X(α)`.
///
/// The zero index has characteristic 1.
pub fn char_numeric(alpha: &MultiIndex, x: &LatticeSpec) -> Result<Bracket> {
    check_dim(alpha, x)?;
    if alpha.is_zero() {
        return Ok(Bracket::exact(1.0, "constant monomial"));
    }
    let s = log_sup_monomial(alpha, x);
    Ok(Bracket::new(
        (-s.upper).exp(),
        (-s.attained).exp(),
        "log-domain pooled maximizer with dual certificate",
        alpha.support_size() as u64,
    ))
}

/// Interval `[lo, hi]` for `c_X(α)`: the closed form for `ℓ_p`, the
/// certified bracket otherwise.
pub fn char_interval(alpha: &MultiIndex, x: &LatticeSpec) -> (f64, f64) {
    if let Family::Lp { p } = x.family() {
        let v = char_closed_lp(alpha, p);
        return (v, v);
    }
    if alpha.is_zero() {
        return (1.0, 1.0);
    }
    let s = log_sup_monomial(alpha, x);
    ((-s.upper).exp(), (-s.attained).exp())
}

/// Named upper bounds for `c_X(α)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharBounds {
    /// `(m^m/α^α)/c_{X′}(α)`, served only when the dual is exact (`ℓ_p`).
    pub lozanovskii_product: Option<f64>,
    /// `‖α‖_X^m / α^α`.
    pub alpha_norm: f64,
    /// `‖m^{−1/r}α^{1/r}‖_X^m · (m^m/α^α)^{1/r}`.
    pub scaled_alpha: f64,
}

/// The three named upper bounds, with `r` the exponent of the scaled test
/// vector.
pub fn char_bounds(alpha: &MultiIndex, x: &LatticeSpec, r: f64) -> Result<CharBounds> {
    check_dim(alpha, x)?;
    if alpha.is_zero() {
        return Ok(CharBounds { lozanovskii_product: Some(1.0), alpha_norm: 1.0, scaled_alpha: 1.0 });
    }
    let m = alpha.order() as f64;
    let ln_aa: f64 = alpha.exponents().iter().filter(|&&a| a > 0).map(|&a| a as f64 * (a as f64).ln()).sum();
    let ev = x.evaluator();
    let lozanovskii_product = match x.family() {
        Family::Lp { p } => {
            let dual = char_closed_lp(alpha, conjugate(p));
            Some(ln_mm_over_aa(alpha).exp() / dual)
        }
        Family::Lorentz { .. } => None,
    };
    let as_f: Vec<f64> = alpha.exponents().iter().map(|&a| a as f64).collect();
    let alpha_norm = (m * ev.norm_abs(&as_f).ln() - ln_aa).exp();
    let scaled: Vec<f64> =
        as_f.iter().map(|&a| if r.is_infinite() { f64::from(u8::from(a > 0.0)) } else { (a / m).powf(1.0 / r) }).collect();
    let scaled_alpha = (m * ev.norm_abs(&scaled).ln()).exp() * char_closed_lp(alpha, r);
    Ok(CharBounds { lozanovskii_product, alpha_norm, scaled_alpha })
}

/// Full characteristic record for one multi-index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharResult {
    pub alpha: MultiIndex,
    pub lattice: LatticeSpec,
    /// Closed-form value when one is available.
    pub exact: Option<f64>,
    pub bracket: Bracket,
    pub bounds: CharBounds,
}

impl CharResult {
    /// CSV header matching [`CharResult::csv_row`].
    pub const CSV_HEADER: [&'static str; 7] =
        ["alpha", "lattice", "lo", "hi", "lozanovskii_product", "alpha_norm", "scaled_alpha"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.alpha.to_string(),
            self.lattice.label(),
            format!("{:.12e}", self.bracket.lo),
            format!("{:.12e}", self.bracket.hi),
            self.bounds.lozanovskii_product.map_or_else(String::new, |v| format!("{v:.12e}")),
            format!("{:.12e}", self.bounds.alpha_norm),
            format!("{:.12e}", self.bounds.scaled_alpha),
        ]
    }
}

/// Characteristic bracket plus named bounds; `r` defaults to the lattice's
/// `p` for the scaled test vector.
pub fn characteristic(alpha: &MultiIndex, x: &LatticeSpec) -> Result<CharResult> {
    let bracket = char_numeric(alpha, x)?;
    let (p, _) = x.exponents();
    let exact = match x.family() {
        Family::Lp { p } => Some(char_closed_lp(alpha, p)),
        Family::Lorentz { p, q } if p == q => Some(char_closed_lp(alpha, p)),
        _ => None,
    };
    Ok(CharResult { alpha: alpha.clone(), lattice: *x, exact, bracket, bounds: char_bounds(alpha, x, p)? })
}

fn check_dim(alpha: &MultiIndex, x: &LatticeSpec) -> Result<()> {
    if alpha.dimension() != x.dimension() {
        return Err(Error::DimensionMismatch { expected: x.dimension(), got: alpha.dimension() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn closed_form_examples() {
        assert!((char_closed_lp(&mi(&[1, 1]), 1.0) - 4.0).abs() < 1e-12);
        assert!((char_closed_lp(&mi(&[1, 1]), 2.0) - 2.0).abs() < 1e-12);
        assert_eq!(char_closed_lp(&mi(&[3, 1]), f64::INFINITY), 1.0);
        // tetrahedral: m^{m/r}
        assert!((char_closed_lp(&mi(&[1, 1, 1, 0]), 3.0) - 3.0).abs() < 1e-12);
        assert_eq!(char_closed_lp(&mi(&[0, 0]), 2.0), 1.0);
    }

    #[test]
    fn numeric_examples() {
        let b = char_numeric(&mi(&[1, 1]), &LatticeSpec::lp(2.0, 2)).unwrap();
        assert!(b.contains(2.0, 1e-12) && b.width() < 1e-6, "{b:?}");
        let b = char_numeric(&mi(&[2, 1, 0]), &LatticeSpec::lorentz(2.0, 2.0, 3)).unwrap();
        assert!((b.mid() - char_closed_lp(&mi(&[2, 1, 0]), 2.0)).abs() < 1e-9);
        let target = (1.0 + 2f64.powf(-0.5)).powi(2);
        let b = char_numeric(&mi(&[1, 1]), &LatticeSpec::lorentz(2.0, 1.0, 2)).unwrap();
        assert!(b.contains(target, 1e-12) && b.width() < 1e-9, "{b:?}");
    }

    #[test]
    fn weak_type_and_sup_norm() {
        let b = char_numeric(&mi(&[2, 1]), &LatticeSpec::lp(f64::INFINITY, 2)).unwrap();
        assert!((b.lo - 1.0).abs() < 1e-12 && (b.hi - 1.0).abs() < 1e-12);
        // ℓ_{2,∞}: z_k ≤ k^{−1/2}, so sup z^α = 2^{−1/2} for α = (1,1)
        let b = char_numeric(&mi(&[1, 1]), &LatticeSpec::lorentz(2.0, f64::INFINITY, 2)).unwrap();
        assert!(b.contains(2f64.sqrt(), 1e-12));
    }

    #[test]
    fn bounds_examples() {
        let b = char_bounds(&mi(&[1, 1]), &LatticeSpec::lp(2.0, 2), 2.0).unwrap();
        assert!((b.alpha_norm - 2.0).abs() < 1e-12);
        assert!((b.lozanovskii_product.unwrap() - 2.0).abs() < 1e-12);
        let b = char_bounds(&mi(&[1, 1]), &LatticeSpec::lp(1.0, 2), 1.0).unwrap();
        assert!((b.alpha_norm - 4.0).abs() < 1e-12);
        assert!((b.scaled_alpha - 4.0).abs() < 1e-12);
    }

    #[test]
    fn certificate_is_tight_for_lorentz() {
        let x = LatticeSpec::lorentz(3.0, 1.5, 4);
        for alpha in [mi(&[3, 1, 1, 0]), mi(&[1, 1, 1, 1]), mi(&[4, 0, 0, 2])] {
            let s = log_sup_monomial(&alpha, &x);
            assert!(s.upper >= s.attained);
            assert!(s.upper - s.attained < 1e-10, "{alpha}: {s:?}");
            assert!(x.norm_real(&s.point).unwrap() <= 1.0 + 1e-12);
        }
    }
}
