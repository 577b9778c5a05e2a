//! Homogeneous Bohr radii `K_m(B_{X_n}, J) = χ_mon(P_{J(m)})^{−1/m}` and the
//! Bohr radius `K(B_{X_n}, J)` through the sandwich
//! `(1/3) inf_m K_m ≤ K ≤ inf_m K_m`.

use std::f64::consts::E;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::chi_mon::{chi_mon_bracket, chi_mon_upper};
use super::lambda_hat::lambda_hat_upper;
use super::{ChainEntry, ConstantReport, Quantity};
use crate::bracket::{Bracket, Budget};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::multiindex::{binomial, reduce, IndexSetSpec, MultiIndex};
use crate::tetra_average::{kappa, prime_count};

/// Slices larger than this get cardinality-only bounds past the truncation.
const CHEAP_ENUMERATION_CAP: u64 = 200_000;

/// Default truncation degree `max(8, ⌈2 ln n⌉)`.
pub fn default_m_max(n: usize) -> u32 {
    8u32.max((2.0 * (n.max(1) as f64).ln()).ceil() as u32)
}

fn invert(chi: &Bracket, m: u32) -> Bracket {
    let e = -1.0 / m as f64;
    Bracket::new(chi.hi.powf(e), chi.lo.powf(e), chi.method.clone(), chi.evaluations)
}

/// Bracket for `K_m(B_{X_n}, J)` where `m` is the top order of `J` and only
/// the slice `J(m)` enters: `[χ_hi^{−1/m}, χ_lo^{−1/m}]`.
pub fn k_m_bracket(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<Bracket> {
    let m = j.max_order();
    if m == 0 {
        return Err(Error::InvalidArgument("K_m needs a slice of order at least 1".into()));
    }
    let slice = j.slice(m);
    if slice.cardinality() == 0u32.into() {
        return Err(Error::InvalidArgument(format!("slice of order {m} is empty")));
    }
    Ok(invert(&chi_mon_bracket(&slice, x, budget)?, m))
}

/// [`k_m_bracket`] with the bound chain of the underlying `χ_mon` bracket.
pub fn k_m_report(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<ConstantReport> {
    let m = j.max_order();
    if m == 0 {
        return Err(Error::InvalidArgument("K_m needs a slice of order at least 1".into()));
    }
    let slice = j.slice(m);
    if slice.cardinality() == 0u32.into() {
        return Err(Error::InvalidArgument(format!("slice of order {m} is empty")));
    }
    let chi = super::chi_mon::chi_mon_report(&slice, x, budget)?;
    let e = -1.0 / m as f64;
    let chain = chi
        .chain
        .iter()
        .map(|c| match c.side {
            // an upper bound on χ is a lower bound on K_m and vice versa
            super::Side::Upper => ChainEntry::lower(format!("chi_{}", c.name), c.value.powf(e)),
            super::Side::Lower => ChainEntry::upper(format!("chi_{}", c.name), c.value.powf(e)),
            super::Side::Term => ChainEntry::term(format!("chi_{}", c.name), c.value.powf(e)),
        })
        .collect();
    Ok(ConstantReport {
        quantity: Quantity::KM,
        index_set: slice,
        lattice: *x,
        m,
        bracket: invert(&chi.bracket, m),
        chain,
        truncated: false,
    })
}

/// Upper bound for the Bohr radius from truncated disc automorphisms
/// `φ_a(z) = (a − z)/(1 − az)`, valid whenever `J ⊇ {k e_1 : 0 ≤ k ≤ degree}`.
///
/// The truncation `T_N φ_a` has sup norm at most `1 + (1+a)a^N`, so any `r`
/// with `a + Σ_{k≤N} (1−a²)a^{k−1} r^k` above that bound is not admissible.
/// Returns the best `r` over a grid of `a` and the `a` attaining it.
pub fn mobius_upper(degree: u32) -> (f64, f64) {
    let majorant = |a: f64, r: f64| -> f64 {
        let mut s = a;
        let mut t = (1.0 - a * a) * r;
        for _ in 1..=degree {
            s += t;
            t *= a * r;
        }
        s
    };
    let mut best = (1.0, 0.0);
    for i in 0..=490 {
        let a = 0.5 + i as f64 * 0.001;
        let bound = (1.0 + (1.0 + a) * a.powi(degree as i32)) * (1.0 + 1e-12);
        if majorant(a, 1.0) <= bound {
            continue;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if majorant(a, mid) > bound {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if hi < best.0 {
            best = (hi, a);
        }
    }
    best
}

/// Largest `N` with `k e_1 ∈ J` for all `0 ≤ k ≤ N`.
fn axis_run(j: &IndexSetSpec) -> u32 {
    let n = j.dimension();
    let mut k = 0;
    while k <= j.max_order() && j.contains(&MultiIndex::axis(n, 0, k)) {
        k += 1;
    }
    k.saturating_sub(1)
}

/// Cheap lower bound for `K_m` from cardinality (and the analytic `χ` bounds
/// when the slice is small enough to enumerate).
fn cheap_k_lower(slice: &IndexSetSpec, x: &LatticeSpec, m: u32) -> Result<f64> {
    let card = slice.cardinality().to_f64().unwrap_or(f64::INFINITY);
    let mut chi = if x.is_quasi_norm() { card } else { card.sqrt() };
    if card <= CHEAP_ENUMERATION_CAP as f64 {
        chi = chi.min(chi_mon_upper(slice, x)?.0);
    }
    Ok(chi.max(1.0).powf(-1.0 / m as f64))
}

/// `‖Q_{Λ(m,n),J(m)}‖` bound for the projection route.
fn slice_projection(slice: &IndexSetSpec, x: &LatticeSpec, m: u32) -> Result<f64> {
    let n = x.dimension();
    if slice.cardinality() == binomial((n as u64 + m as u64).saturating_sub(1), m as u64) {
        return Ok(1.0);
    }
    let lam = lambda_hat_upper(slice, x)?.0;
    if slice.cardinality() == binomial(n as u64, m as u64) && slice.is_tetrahedral_of_order(m)? {
        return Ok(kappa(prime_count(m as usize)).powi(m as i32).min(lam));
    }
    Ok(lam)
}

fn compute(j: &IndexSetSpec, x: &LatticeSpec, m_max: u32, budget: &Budget) -> Result<(Bracket, Vec<ChainEntry>, bool)> {
    if m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be at least 1".into()));
    }
    if j.dimension() != x.dimension() {
        return Err(Error::DimensionMismatch { expected: x.dimension(), got: j.dimension() });
    }
    let top = j.max_order();
    let orders: Vec<u32> = (1..=top).filter(|&k| j.slice(k).cardinality() > 0u32.into()).collect();
    if orders.is_empty() {
        // only constants: every radius is admissible
        return Ok((Bracket::exact(1.0, "constant polynomials"), vec![ChainEntry::upper("constants_only", 1.0)], false));
    }
    let computed: Vec<u32> = orders.iter().copied().filter(|&k| k <= m_max).collect();
    let skipped: Vec<u32> = orders.iter().copied().filter(|&k| k > m_max).collect();
    let truncated = !skipped.is_empty();

    let km: Vec<(u32, Bracket)> =
        computed.par_iter().map(|&k| Ok((k, invert(&chi_mon_bracket(&j.slice(k), x, budget)?, k)))).collect::<Result<_>>()?;
    let cheap: Vec<(u32, f64)> =
        skipped.par_iter().map(|&k| Ok((k, cheap_k_lower(&j.slice(k), x, k)?))).collect::<Result<_>>()?;

    let mut chain = Vec::new();
    let mut evals = 0;
    for (k, b) in &km {
        chain.push(ChainEntry::upper(format!("K_m_upper_m{k}"), b.hi));
        evals += b.evaluations;
    }
    let cheap_min = cheap.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let km_lo = km.iter().map(|(_, b)| b.lo).fold(cheap_min, f64::min);
    let sandwich = km_lo / 3.0;
    chain.push(ChainEntry::lower("homogeneous_sandwich", sandwich));

    if !x.is_quasi_norm() {
        let mut route = cheap_min / 3.0;
        for &k in &computed {
            let slice = j.slice(k);
            let reduced = reduce(&slice)?;
            let lam = lambda_hat_upper(&reduced, x)?.0.max(1e-300);
            let q = slice_projection(&slice, x, k)?;
            route = route.min((E * q * lam).powf(-1.0 / k as f64) / 6.0);
        }
        chain.push(ChainEntry::lower("projection_route", route));
    }

    let mut hi = km.iter().map(|(_, b)| b.hi).fold(f64::INFINITY, f64::min);
    let mut hi_name = String::from("homogeneous_radius");
    let run = axis_run(j);
    if run >= 1 {
        let (r, a) = mobius_upper(run);
        chain.push(ChainEntry::upper(format!("mobius_family_a{a:.3}"), r));
        if r < hi {
            hi = r;
            hi_name = "mobius_family".into();
        }
    }
    if !hi.is_finite() {
        hi = 1.0;
        hi_name = "trivial".into();
    }
    let (lo, lo_name) = super::best_lower(&chain);
    let lo = lo.min(hi);
    let mut method = format!("lower: {lo_name}; upper: {hi_name}");
    if truncated {
        method.push_str(&format!("; computed m <= {m_max}, cardinality bounds above"));
    }
    Ok((Bracket::new(lo, hi, method, evals), chain, truncated))
}

/// Certified bracket for the Bohr radius `K(B_{X_n}, J)`.
///
/// `K_m` brackets are computed for `m ≤ m_max`; orders above the truncation
/// contribute cardinality-based lower bounds so that the lower end stays
/// valid, and the report flags the truncation. On normed lattices the lower
/// end also takes the projection route
/// `(1/6) inf_m (e‖Q_{Λ(m),J(m)}‖ λ̂(J(m)^♭))^{−1/m}`. The upper end adds the
/// disc-automorphism family when `J` contains the powers of `z_1`.
pub fn bohr_bracket(j: &IndexSetSpec, x: &LatticeSpec, m_max: u32, budget: &Budget) -> Result<Bracket> {
    Ok(compute(j, x, m_max, budget)?.0)
}

/// [`bohr_bracket`] with its bound chain and truncation flag.
pub fn bohr_report(j: &IndexSetSpec, x: &LatticeSpec, m_max: u32, budget: &Budget) -> Result<ConstantReport> {
    let (bracket, chain, truncated) = compute(j, x, m_max, budget)?;
    Ok(ConstantReport { quantity: Quantity::Bohr, index_set: j.clone(), lattice: *x, m: m_max, bracket, chain, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_radius_is_one() {
        for x in [LatticeSpec::lp(1.0, 3), LatticeSpec::lp(f64::INFINITY, 3), LatticeSpec::lorentz(2.0, 4.0, 3)] {
            let b = k_m_bracket(&IndexSetSpec::full(3, 1), &x, &Budget::default()).unwrap();
            assert_eq!((b.lo, b.hi), (1.0, 1.0));
        }
    }

    #[test]
    fn mobius_corridor() {
        let (r, _) = mobius_upper(64);
        assert!(r > 1.0 / 3.0 && r < 0.37, "{r}");
        // longer truncations approach one third
        assert!(mobius_upper(400).0 < r);
    }

    #[test]
    fn disc() {
        let b =
            bohr_bracket(&IndexSetSpec::full_up_to(1, 64), &LatticeSpec::lp(f64::INFINITY, 1), 8, &Budget::default()).unwrap();
        assert!((b.lo - 1.0 / 3.0).abs() < 1e-12, "{b:?}");
        assert!(b.hi >= 1.0 / 3.0 && b.hi <= 0.37, "{b:?}");
    }

    #[test]
    fn default_truncation() {
        assert_eq!(default_m_max(16), 8);
        assert_eq!(default_m_max(100_000), 24);
    }
}
