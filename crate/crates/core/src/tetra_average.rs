//! Prime-product averaging onto tetrahedral coefficients.
//!
//! For `t ∈ [0,1]^{π(m)}` the function
//! `r_m(t) = c_m exp(2πi Σ_j t_j/p_j)` has constant modulus `|c_m|`, integral
//! 1 and vanishing `k`-th moments for `2 ≤ k ≤ m`. Substituting `z_k r_m(t^k)`
//! into a polynomial of degree at most `m` and averaging keeps exactly the
//! tetrahedral coefficients, so the tetrahedral projection has norm at most
//! `κ^m` with `κ = ∏_p sinc(π/p)^{-1}`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bracket::{stream_seed, Budget};
use crate::error::Result;
use crate::lattice::LatticeSpec;
use crate::multiindex::IndexSetSpec;
use crate::polynomials::{sup_norm, Polynomial};
use crate::quadrature;

/// Number of primes used for the reference value of `κ`.
pub const KAPPA_PRIMES: usize = 1_000_000;

/// All primes `≤ limit` (sieve of Eratosthenes).
pub fn primes_up_to(limit: usize) -> Vec<usize> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i);
        let mut j = i.saturating_mul(i);
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<usize> {
    if count == 0 {
        return Vec::new();
    }
    // p_N < N (ln N + ln ln N) for N ≥ 6
    let n = count.max(6) as f64;
    let limit = (n * (n.ln() + n.ln().ln())).ceil() as usize + 10;
    let mut p = primes_up_to(limit);
    p.truncate(count);
    p
}

/// Prime counting function `π(m)`.
pub fn prime_count(m: usize) -> usize {
    primes_up_to(m).len()
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// `ln sinc(π/p)^{-1}` for each prime.
fn log_factors(primes: &[usize]) -> impl Iterator<Item = f64> + '_ {
    primes.iter().map(|&p| -sinc(PI / p as f64).ln())
}

/// Partial product `(∏_{k≤N} sinc(π/p_k))^{-1}`; `N = 0` gives 1.
pub fn kappa(num_primes: usize) -> f64 {
    kappa_partials(&first_primes(num_primes)).last().copied().unwrap_or(1.0)
}

/// All partial products over `primes`, in order.
pub fn kappa_partials(primes: &[usize]) -> Vec<f64> {
    let mut acc = 0.0;
    log_factors(primes)
        .map(|l| {
            acc += l;
            acc.exp()
        })
        .collect()
}

/// `κ` from the first [`KAPPA_PRIMES`] primes, computed once.
pub fn kappa_reference() -> f64 {
    static K: OnceLock<f64> = OnceLock::new();
    *K.get_or_init(|| kappa(KAPPA_PRIMES))
}

/// `∫_0^1 exp(2πi k t/p) dt`.
fn unimodular_average(k: u32, p: usize) -> Complex64 {
    if (k as usize).is_multiple_of(p) {
        return if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let w = 2.0 * PI * k as f64 / p as f64;
    (Complex64::from_polar(1.0, w) - 1.0) / Complex64::new(0.0, w)
}

/// The averaging function `r_m` of degree `m`.
#[derive(Clone, Debug)]
pub struct PrimeAverager {
    pub m: u32,
    pub primes: Vec<usize>,
    pub c_m: Complex64,
}

impl PrimeAverager {
    pub fn new(m: u32) -> Self {
        let primes = primes_up_to(m as usize);
        let c_m = primes.iter().map(|&p| unimodular_average(1, p)).product::<Complex64>().inv();
        PrimeAverager { m, primes, c_m }
    }

    /// `r_m(t)` for `t ∈ [0,1]^{π(m)}`.
    pub fn value(&self, t: &[f64]) -> Complex64 {
        let phase: f64 = t.iter().zip(&self.primes).map(|(ti, &p)| ti / p as f64).sum();
        self.c_m * Complex64::from_polar(1.0, 2.0 * PI * phase)
    }

    /// `|r_m|`, which equals `kappa(π(m))`.
    pub fn modulus(&self) -> f64 {
        self.c_m.norm()
    }
}

/// `∫ r_m^k dμ` in closed form.
pub fn moment(m: u32, k: u32) -> Complex64 {
    let r = PrimeAverager::new(m);
    r.primes.iter().map(|&p| unimodular_average(k, p)).product::<Complex64>() * r.c_m.powu(k)
}

/// `∫ r_m^k dμ` by tensor Gauss–Legendre quadrature on `[0,1]^{π(m)}`.
pub fn moment_quadrature(m: u32, k: u32) -> Complex64 {
    let r = PrimeAverager::new(m);
    let rules: Vec<(Vec<f64>, Vec<f64>)> =
        r.primes.iter().map(|&p| quadrature::composite(0.0, 1.0, (k as usize).div_ceil(p) + 1, 16)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; rules.len()];
    let mut t = vec![0.0; rules.len()];
    loop {
        let mut w = 1.0;
        for (j, rule) in rules.iter().enumerate() {
            t[j] = rule.0[idx[j]];
            w *= rule.1[idx[j]];
        }
        acc += r.value(&t).powu(k) * w;
        let mut j = 0;
        while j < rules.len() {
            idx[j] += 1;
            if idx[j] < rules[j].0.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == rules.len() {
            break;
        }
    }
    acc
}

/// Parameters of one tetrahedral projection check.
#[derive(Clone, Debug, Serialize)]
pub struct TetraGrid {
    pub lattice: LatticeSpec,
    pub m: u32,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

/// A trial reported by [`tetra_projection_norm_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TetraWitness {
    pub trial: usize,
    pub ratio: f64,
    pub projected_lo: f64,
    pub original_hi: f64,
    /// Point attaining `projected_lo`, as `[re, im]` pairs.
    pub point: Vec<[f64; 2]>,
    pub polynomial: Polynomial,
}

/// Outcome of [`tetra_projection_norm_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TetraReport {
    pub grid: TetraGrid,
    pub max_ratio: f64,
    pub kappa_pow_m: f64,
    /// The worst trial, followed by every trial exceeding `κ^m`.
    pub witnesses: Vec<TetraWitness>,
    pub violations: usize,
}

fn random_polynomial(n: usize, m: u32, rng: &mut ChaCha8Rng) -> Result<Polynomial> {
    let support = IndexSetSpec::full_up_to(n, m).enumerate()?;
    Polynomial::from_terms(
        n,
        support.into_iter().map(|a| {
            let r: f64 = rng.random();
            let t: f64 = rng.random::<f64>() * 2.0 * PI;
            (a, Complex64::from_polar(r, t))
        }),
    )
}

/// Checks `‖Q P‖ ≤ κ^m ‖P‖` for random `P ∈ P_{Λ(≤m,n)}`, where `Q` keeps
/// the tetrahedral coefficients. The ratio uses the attained value of `QP`
/// over the proven upper bound of `P`.
pub fn tetra_projection_norm_check(x: &LatticeSpec, m: u32, n: usize, trials: usize, seed: u64) -> Result<TetraReport> {
    let x = x.with_dimension(n);
    // a 1e-3 relative cover gap is ample against the factor κ^m
    let budget = Budget { tolerance: 1e-5, ..Budget::default().with_seed(seed).with_restarts(16).with_iterations(200) };
    let tetra = IndexSetSpec::tetra_up_to(n, m);
    let kappa_pow_m = kappa_reference().powi(m as i32);
    let outcomes: Vec<Result<TetraWitness>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, trial as u64));
            let p = random_polynomial(n, m, &mut rng)?;
            let q = p.project(&tetra)?;
            let trial_budget = budget.with_seed(stream_seed(seed, (trials + trial) as u64));
            let hi = sup_norm(&p, &x, &trial_budget)?.hi;
            let qb = sup_norm(&q, &x, &trial_budget)?;
            let point = qb.witness.clone().unwrap_or_default().iter().map(|z| [z.re, z.im]).collect();
            let ratio = if hi > 0.0 { qb.lo / hi } else { 0.0 };
            Ok(TetraWitness { trial, ratio, projected_lo: qb.lo, original_hi: hi, point, polynomial: p })
        })
        .collect();
    let mut all = Vec::with_capacity(trials);
    for o in outcomes {
        all.push(o?);
    }
    let worst = all.iter().enumerate().fold(None, |best: Option<(usize, f64)>, (i, w)| match best {
        Some((_, r)) if r >= w.ratio => best,
        _ => Some((i, w.ratio)),
    });
    let max_ratio = worst.map_or(0.0, |(_, r)| r);
    let mut witnesses = Vec::new();
    if let Some((i, _)) = worst {
        witnesses.push(all[i].clone());
    }
    let bad: Vec<TetraWitness> = all.into_iter().filter(|w| w.ratio > kappa_pow_m + 1e-6).collect();
    let violations = bad.len();
    witnesses.extend(bad);
    Ok(TetraReport { grid: TetraGrid { lattice: x, m, n, trials, seed }, max_ratio, kappa_pow_m, witnesses, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        assert!((kappa(1) - PI / 2.0).abs() < 1e-14);
        let two = 1.0 / ((2.0 / PI) * sinc(PI / 3.0));
        assert!((kappa(2) - two).abs() < 1e-14);
        assert!((kappa(2) - 1.8994).abs() < 1e-4);
        let p = kappa_partials(&first_primes(1000));
        assert!(p.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
        assert_eq!(first_primes(10_000).last(), Some(&104_729));
        assert_eq!(prime_count(7), 4);
    }

    #[test]
    fn moments() {
        for m in 1..=7 {
            assert!((moment(m, 1) - 1.0).norm() < 1e-12);
            for k in 2..=m {
                assert!(moment(m, k).norm() < 1e-12);
            }
        }
        // 6 is divisible by 2 and by 3
        assert!(moment(3, 6).norm() < 1e-12);
        // 5 is coprime to 2 and 3
        assert!(moment(3, 5).norm() > 0.1);
        let r = PrimeAverager::new(7);
        assert!((r.modulus() - kappa(4)).abs() < 1e-12);
        assert!((r.value(&[0.3, 0.1, 0.9, 0.5]).norm() - r.modulus()).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for m in 1..=5 {
            for k in 1..=10 {
                assert!((moment(m, k) - moment_quadrature(m, k)).norm() < 1e-10, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn projection_examples() {
        let rep = tetra_projection_norm_check(&LatticeSpec::lp(f64::INFINITY, 2), 2, 2, 8, 0).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_ratio <= rep.kappa_pow_m);
        let p = Polynomial::from_real(1, [(crate::MultiIndex::new(vec![2]), 1.0)]).unwrap();
        let q = p.project(&IndexSetSpec::tetra_up_to(1, 2)).unwrap();
        assert!(q.is_empty());
    }
}
