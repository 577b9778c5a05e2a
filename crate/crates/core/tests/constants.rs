//! Projection constants, unconditional constants and Bohr radii on small
//! instances, checked against closed forms and each other.

use std::f64::consts::PI;

use bpl_core::constants::{
    bohr_report, chi_mon_report, k_m_report, kadets_snobar, lambda_hat_report, reference_asymptotic, ReferenceCurve,
};
use bpl_core::{
    bohr_bracket, chi_mon_bracket, k_m_bracket, lambda_hat, lebesgue_constant, lorentz_bound_suite, rw_projection_constant,
    Budget, IndexSetSpec, LatticeSpec,
};
use proptest::prelude::*;

fn lattices(n: usize) -> Vec<LatticeSpec> {
    vec![
        LatticeSpec::lp(1.0, n),
        LatticeSpec::lp(2.0, n),
        LatticeSpec::lp(f64::INFINITY, n),
        LatticeSpec::lorentz(2.0, 1.0, n),
        LatticeSpec::lorentz(3.0, 1.0, n),
    ]
}

fn factorial(k: u64) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Even-degree projection constant from factorials:
/// `C(n+2k−1, 2k) · k!(n−1)!/(n+k−1)!`.
fn rw_even(k: u64, n: u64) -> f64 {
    let dim = factorial(n + 2 * k - 1) / (factorial(2 * k) * factorial(n - 1));
    dim * factorial(k) * factorial(n - 1) / factorial(n + k - 1)
}

/// `(1/2π)∫|D_m|` by a midpoint rule on a fine grid.
fn lebesgue_oracle(m: u32) -> f64 {
    let k = 1_000_000;
    let h = 2.0 * PI / k as f64;
    let kernel = |t: f64| 1.0 + 2.0 * (1..=m).map(|j| (f64::from(j) * t).cos()).sum::<f64>();
    (0..k).map(|i| kernel(-PI + (i as f64 + 0.5) * h).abs()).sum::<f64>() * h / (2.0 * PI)
}

#[test]
fn projection_constant_closed_forms() {
    for k in 1..=5u64 {
        for n in 1..=6u64 {
            let v = rw_projection_constant(2 * k as u32, n as usize);
            assert!((v - rw_even(k, n)).abs() < 1e-10 * v, "m={} n={n}", 2 * k);
        }
    }
    for m in 0..=6 {
        assert!((rw_projection_constant(m, 1) - 1.0).abs() < 1e-12);
    }
    assert_eq!(kadets_snobar(16.0), 4.0);
}

#[test]
fn lebesgue_constants_match_midpoint_rule() {
    assert_eq!(lebesgue_constant(0), 1.0);
    let l1 = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
    assert!((lebesgue_constant(1) - l1).abs() < 1e-12);
    let mut prev = 1.0;
    for m in 1..=5 {
        let v = lebesgue_constant(m);
        assert!((v - lebesgue_oracle(m)).abs() < 1e-8, "m={m}");
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn reference_curves() {
    let c = ReferenceCurve::from_name("sqrt_logn_over_n", None, None, None).unwrap();
    assert!((reference_asymptotic(&c, 100.0) - (100f64.ln() / 100.0).sqrt()).abs() < 1e-15);
    let c = ReferenceCurve::from_name("km_two_convex", None, None, Some(2)).unwrap();
    assert!((reference_asymptotic(&c, 6.0) - 0.25f64.powf(0.25)).abs() < 1e-15);
    assert!(ReferenceCurve::from_name("logn_over_n_pow", None, None, None).is_err());
    assert!(ReferenceCurve::from_name("nope", None, None, None).is_err());
}

#[test]
fn linear_projection_constant_is_dual_fundamental_function() {
    let b = Budget::default();
    for n in [1usize, 2, 3, 5] {
        for x in lattices(n) {
            let want = x.dual_fundamental_function(n).unwrap().unwrap();
            let l = lambda_hat(&IndexSetSpec::full(n, 1), &x, &b).unwrap();
            assert!(
                l.lo <= want * (1.0 + 1e-9) && l.hi >= want * (1.0 - 1e-9),
                "{} n={n}: [{}, {}] vs {want}",
                x.label(),
                l.lo,
                l.hi
            );
            assert!(l.width() <= 1e-5 * want, "{} n={n}: [{}, {}]", x.label(), l.lo, l.hi);
        }
    }
}

#[test]
fn projection_constant_dominates_the_hilbert_value() {
    let b = Budget::default();
    for m in 1..=4 {
        let l = lambda_hat(&IndexSetSpec::full(2, m), &LatticeSpec::lp(2.0, 2), &b).unwrap();
        assert!(rw_projection_constant(m, 2) <= l.hi + 1e-6, "m={m}: rw {} hi {}", rw_projection_constant(m, 2), l.hi);
    }
}

#[test]
fn homogeneous_parts_do_not_exceed_the_whole() {
    let b = Budget::default().with_restarts(16).with_iterations(200);
    for x in lattices(2) {
        let j = IndexSetSpec::full_up_to(2, 3);
        let whole = lambda_hat_report(&j, &x, &b).unwrap();
        assert!(whole.is_consistent());
        for k in 0..=3 {
            let part = lambda_hat(&j.slice(k), &x, &b).unwrap();
            assert!(part.lo <= whole.bracket.hi * (1.0 + 1e-9), "{} k={k}", x.label());
        }
    }
}

#[test]
fn unconditional_constant_of_linear_forms_is_one() {
    let b = Budget::default();
    for x in lattices(4) {
        let chi = chi_mon_bracket(&IndexSetSpec::full(4, 1), &x, &b).unwrap();
        assert!(
            chi.lo <= 1.0 + 1e-12 && chi.hi >= 1.0 - 1e-12 && chi.hi <= 1.0 + 1e-9,
            "{}: [{}, {}]",
            x.label(),
            chi.lo,
            chi.hi
        );
    }
}

#[test]
fn homogeneous_radius_inverts_the_unconditional_constant() {
    let b = Budget::default().with_restarts(16).with_iterations(200);
    for x in lattices(2) {
        for m in 1..=3 {
            let j = IndexSetSpec::full(2, m);
            let chi = chi_mon_bracket(&j, &x, &b).unwrap();
            let k = k_m_bracket(&j, &x, &b).unwrap();
            let e = -1.0 / f64::from(m);
            assert_eq!(k.lo.to_bits(), chi.hi.powf(e).to_bits());
            assert_eq!(k.hi.to_bits(), chi.lo.powf(e).to_bits());
            assert!(chi.lo >= 1.0 - 1e-12 && chi.is_valid());
            let report = k_m_report(&j, &x, &b).unwrap();
            assert!(report.is_consistent());
            assert!(chi_mon_report(&j, &x, &b).unwrap().is_consistent());
        }
    }
    assert!(k_m_bracket(&IndexSetSpec::full(2, 0), &LatticeSpec::lp(2.0, 2), &b).is_err());
}

#[test]
fn one_variable_bohr_radius_sandwich() {
    // every homogeneous radius is 1 in one variable, so lo ≥ hi/3
    let b = Budget::default();
    for x in lattices(1) {
        let report = bohr_report(&IndexSetSpec::full_up_to(1, 12), &x, 12, &b).unwrap();
        let r = &report.bracket;
        assert!(report.is_consistent() && !report.truncated);
        assert!(r.lo >= r.hi / 3.0 - 1e-12 && r.hi <= 1.0 + 1e-12, "{}: [{}, {}]", x.label(), r.lo, r.hi);
        assert!(r.lo >= 1.0 / 3.0 - 1e-12);
    }
    let disc = bohr_bracket(&IndexSetSpec::full_up_to(1, 64), &LatticeSpec::lp(f64::INFINITY, 1), 8, &b).unwrap();
    assert!(disc.lo <= 1.0 / 3.0 + 1e-12 && disc.hi >= 1.0 / 3.0 && disc.hi <= 0.37, "[{}, {}]", disc.lo, disc.hi);
}

#[test]
fn truncated_bohr_radius_is_flagged() {
    let b = Budget::default().with_restarts(8).with_iterations(100);
    let report = bohr_report(&IndexSetSpec::full_up_to(2, 6), &LatticeSpec::lp(2.0, 2), 3, &b).unwrap();
    assert!(report.truncated && report.is_consistent());
    assert!(report.bracket.lo > 0.0);
}

#[test]
fn lorentz_suite_small_instance() {
    let report = lorentz_bound_suite(2, 4, 2.0, 1.0, &Budget::default().with_restarts(8).with_iterations(100)).unwrap();
    assert_eq!(report.violations(), 0);
    for inst in &report.instances {
        assert!(inst.bracket.is_valid(), "{}", inst.label);
        assert!(inst.c_implied.is_finite() && inst.c_implied > 0.0, "{}", inst.label);
    }
    let full = report.instance("full").expect("full instance");
    assert!(
        full.bracket.lo
            <= report.instances.iter().filter(|i| i.label.starts_with("support_level")).map(|i| i.bracket.hi).sum::<f64>() + 1e-9
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brackets_are_consistent(n in 1usize..=3, m in 1u32..=3, which in 0usize..5, seed in 0u64..100) {
        let x = lattices(n)[which];
        let b = Budget::default().with_seed(seed).with_restarts(8).with_iterations(100);
        for j in [IndexSetSpec::full(n, m), IndexSetSpec::tetra_up_to(n, m), IndexSetSpec::even(n, 2)] {
            prop_assume!(j.cardinality() > 0u32.into());
            let l = lambda_hat_report(&j, &x, &b).unwrap();
            prop_assert!(l.is_consistent(), "{} on {}", j.label(), x.label());
            prop_assert!(l.bracket.lo >= 1.0 - 1e-12);
        }
    }
}
