//! Polynomial projection constants on Lorentz spaces `ℓ_{r,s}^n` against the
//! power-law right-hand sides, and pointwise checks of the tetrahedral/even
//! splitting estimates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lambda_hat::lambda_hat;
use crate::bracket::{stream_seed, Bracket, Budget};
use crate::error::{Error, Result};
use crate::lattice::{conjugate, LatticeSpec};
use crate::multiindex::{ln_class_size, IndexSetSpec, MultiIndex};

/// Pointwise samples per check.
pub const POINTWISE_SAMPLES: usize = 1000;

/// One index set of the suite with its `λ̂` bracket.
#[derive(Clone, Debug, Serialize)]
pub struct LorentzInstance {
    pub label: String,
    pub index_set: IndexSetSpec,
    pub bracket: Bracket,
    /// Power-law right-hand side at this `(m, n, r)`.
    pub rhs: f64,
    /// `(lo/rhs)^{1/m}`.
    pub c_implied: f64,
}

/// Outcome of a pointwise inequality over sampled vectors.
#[derive(Clone, Debug, Serialize)]
pub struct PointwiseCheck {
    pub name: String,
    pub samples: usize,
    pub violations: usize,
    /// Largest observed `lhs/rhs`.
    pub max_ratio: f64,
}

/// Full output of [`lorentz_bound_suite`].
#[derive(Clone, Debug, Serialize)]
pub struct LorentzReport {
    pub m: u32,
    pub n: usize,
    pub r: f64,
    pub s: f64,
    pub instances: Vec<LorentzInstance>,
    /// `Σ_L λ̂(Λ^L).lo` over the support-size slices.
    pub slice_sum_lo: f64,
    pub checks: Vec<PointwiseCheck>,
}

impl LorentzReport {
    pub fn instance(&self, label: &str) -> Option<&LorentzInstance> {
        self.instances.iter().find(|i| i.label == label)
    }

    /// Total pointwise violations.
    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }
}

/// `Σ_{α∈A} |z^α| |[α]|^{1/r}` over a precomputed list of `(α, ln|[α]|/r)`.
struct WeightedSum {
    terms: Vec<(MultiIndex, f64)>,
}

impl WeightedSum {
    fn new(members: Vec<MultiIndex>, r: f64) -> Self {
        WeightedSum {
            terms: members
                .into_iter()
                .map(|a| {
                    let w = ln_class_size(&a) / r;
                    (a, w)
                })
                .collect(),
        }
    }

    fn eval(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, w)| a.exponents().iter().zip(z).map(|(&e, &zi)| zi.powi(e as i32)).product::<f64>() * w.exp())
            .sum()
    }
}

fn sample(rng: &mut ChaCha8Rng, n: usize, i: usize) -> Vec<f64> {
    if i == 0 {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        return e;
    }
    let scale = 10f64.powf(rng.random::<f64>() * 2.0 - 1.0);
    let density = rng.random::<f64>();
    (0..n).map(|_| if rng.random::<f64>() <= density.max(0.2) { scale * rng.random::<f64>() } else { 0.0 }).collect()
}

fn lp_norm(z: &[f64], r: f64) -> f64 {
    z.iter().map(|v| v.powf(r)).sum::<f64>().powf(1.0 / r)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Runs the suite at `(m, n)` on `ℓ_{r,s}^n`.
///
/// For `Λ_T(m,n)`, `Λ(m,n)` and the support-size slices `Λ^L(m,n)` it
/// brackets `λ̂` and reports `C_implied = (lo/RHS)^{1/m}` with
/// `RHS = (n/m)^{m·min(1/2, 1/r′)}` for the tetrahedral set and
/// `(1 + n/m)^{m·min(1/2, 1/r′)}` otherwise. It then checks at sampled
/// vectors:
/// - the tetrahedral estimate `Σ_{Λ_T}|z^α||[α]|^{1/r} ≤ ‖z‖_1^m / m!^{1/r′}`;
/// - the even estimate `Σ_{Λ_E}|z^α||[α]|^{1/r} ≤ 2^{m/2r}‖z‖_r^m` (needs `r ≤ 2`);
/// - the splitting `Σ_Λ ≤ 2^{m/r} Σ_k T_k E_{m−k}` with `T_k`, `E_j` the
///   tetrahedral and even sums.
pub fn lorentz_bound_suite(m: u32, n: usize, r: f64, s: f64, budget: &Budget) -> Result<LorentzReport> {
    if !(r > 1.0 && r.is_finite()) || !(s >= 1.0) || m == 0 || m as usize > n {
        return Err(Error::InvalidArgument(format!(
            "suite needs 1 < r < inf, s >= 1, 1 <= m <= n (got m={m}, n={n}, r={r}, s={s})"
        )));
    }
    let x = LatticeSpec::lorentz(r, s, n);
    let mf = m as f64;
    let power = mf * (0.5f64).min(1.0 / conjugate(r));
    let mut sets = vec![("tetra".to_string(), IndexSetSpec::tetra(n, m)), ("full".to_string(), IndexSetSpec::full(n, m))];
    for l in 1..=m.min(n as u32) {
        sets.push((format!("support_level_{l}"), IndexSetSpec::support_level(n, m, l)));
    }
    let mut instances = Vec::new();
    for (label, j) in sets {
        let bracket = lambda_hat(&j, &x, budget)?;
        let rhs = if label == "tetra" { (n as f64 / mf).powf(power) } else { (1.0 + n as f64 / mf).powf(power) };
        let c_implied = (bracket.lo / rhs).powf(1.0 / mf);
        instances.push(LorentzInstance { label, index_set: j, bracket, rhs, c_implied });
    }
    let slice_sum_lo = instances.iter().filter(|i| i.label.starts_with("support_level")).map(|i| i.bracket.lo).sum();

    let tetra: Vec<WeightedSum> =
        (0..=m).map(|k| IndexSetSpec::tetra(n, k).enumerate().map(|v| WeightedSum::new(v, r))).collect::<Result<_>>()?;
    let even: Vec<WeightedSum> =
        (0..=m).map(|k| IndexSetSpec::even(n, k).enumerate().map(|v| WeightedSum::new(v, r))).collect::<Result<_>>()?;
    let full = WeightedSum::new(IndexSetSpec::full(n, m).enumerate()?, r);
    let rc = conjugate(r);
    let slack = 1.0 + 1e-12;

    let mut checks = vec![
        PointwiseCheck { name: "tetrahedral_l1".into(), samples: 0, violations: 0, max_ratio: 0.0 },
        PointwiseCheck { name: "even_lr".into(), samples: 0, violations: 0, max_ratio: 0.0 },
        PointwiseCheck { name: "tetra_even_split".into(), samples: 0, violations: 0, max_ratio: 0.0 },
    ];
    let record = |c: &mut PointwiseCheck, lhs: f64, rhs: f64| {
        c.samples += 1;
        if rhs > 0.0 {
            c.max_ratio = c.max_ratio.max(lhs / rhs);
        }
        if lhs > rhs * slack + 1e-300 {
            c.violations += 1;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(budget.seed, 0x10_4e2));
    for i in 0..POINTWISE_SAMPLES {
        let z = sample(&mut rng, n, i);
        let t: Vec<f64> = tetra.iter().map(|w| w.eval(&z)).collect();
        let e: Vec<f64> = even.iter().map(|w| w.eval(&z)).collect();
        let l1 = lp_norm(&z, 1.0);
        record(&mut checks[0], t[m as usize], l1.powi(m as i32) / factorial(m).powf(1.0 / rc));
        if r <= 2.0 {
            record(&mut checks[1], e[m as usize], 2f64.powf(mf / (2.0 * r)) * lp_norm(&z, r).powi(m as i32));
        }
        let split: f64 = (0..=m as usize).map(|k| t[k] * e[m as usize - k]).sum();
        record(&mut checks[2], full.eval(&z), 2f64.powf(mf / r) * split);
    }
    if r > 2.0 {
        checks.remove(1);
    }
    Ok(LorentzReport { m, n, r, s, instances, slice_sum_lo, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_space_corridor() {
        let rep = lorentz_bound_suite(2, 4, 2.0, 2.0, &Budget::default()).unwrap();
        for inst in &rep.instances {
            assert!(inst.c_implied.is_finite() && inst.c_implied > 0.0 && inst.c_implied <= 4.0, "{inst:?}");
        }
        assert_eq!(rep.violations(), 0);
    }

    #[test]
    fn slices_cover_full() {
        let rep = lorentz_bound_suite(3, 4, 1.5, 4.0, &Budget::default()).unwrap();
        let full = rep.instance("full").unwrap();
        assert!(rep.slice_sum_lo >= full.bracket.lo - 1e-9);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(lorentz_bound_suite(2, 4, 1.0, 2.0, &Budget::default()).is_err());
        assert!(lorentz_bound_suite(5, 4, 2.0, 2.0, &Budget::default()).is_err());
    }
}
