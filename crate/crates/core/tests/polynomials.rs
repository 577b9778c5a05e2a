//! Sup-norm brackets against an independent grid oracle, together with the
//! Cauchy and polarization inequalities.

use std::f64::consts::{FRAC_PI_2, TAU};

use bpl_core::{sup_norm, Budget, Complex64, IndexSetSpec, LatticeSpec, MultiIndex, Polynomial};
use proptest::prelude::*;

fn lattices(n: usize) -> [LatticeSpec; 4] {
    [LatticeSpec::lp(1.0, n), LatticeSpec::lp(2.0, n), LatticeSpec::lp(f64::INFINITY, n), LatticeSpec::lorentz(2.0, 1.0, n)]
}

/// A point of the unit sphere of `x` (n ≤ 2) from a modulus angle and phases.
fn sphere_point(x: &LatticeSpec, phi: f64, theta: &[f64]) -> Vec<Complex64> {
    let moduli = if x.dimension() == 1 { vec![1.0] } else { vec![phi.cos(), phi.sin()] };
    let scale = x.norm_real(&moduli).unwrap();
    moduli.iter().zip(theta).map(|(&r, &t)| Complex64::from_polar(r / scale, t)).collect()
}

/// `|P|` over the unit sphere of `x`: a dense grid in the modulus angle
/// and the phases, then compass search from the best grid points.
fn grid_oracle(p: &Polynomial, x: &LatticeSpec) -> f64 {
    let n = x.dimension();
    let f = |v: &[f64; 3]| p.evaluate(&sphere_point(x, v[0].clamp(0.0, FRAC_PI_2), &v[1..=n])).unwrap().norm();
    let (na, nt) = if n == 1 { (1, 720) } else { (121, 48) };
    let mut best: Vec<(f64, [f64; 3])> = Vec::new();
    for i in 0..na {
        let phi = if na == 1 { 0.0 } else { FRAC_PI_2 * i as f64 / (na - 1) as f64 };
        for a in 0..nt {
            for b in 0..if n == 1 { 1 } else { nt } {
                let v = [phi, TAU * a as f64 / nt as f64, TAU * b as f64 / nt as f64];
                best.push((f(&v), v));
            }
        }
    }
    best.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut top = best[0].0;
    for (mut value, mut v) in best.into_iter().take(6) {
        let mut step = 0.05;
        while step > 1e-10 {
            let mut moved = false;
            for k in 0..=n {
                for sign in [1.0, -1.0] {
                    let mut w = v;
                    w[k] += sign * step;
                    let fw = f(&w);
                    if fw > value {
                        (value, v, moved) = (fw, w, true);
                    }
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        top = top.max(value);
    }
    top
}

fn polynomial(n: usize) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0u32..=3, n), -1.0f64..1.0, -1.0f64..1.0);
    prop::collection::vec(term, 1..=5).prop_map(move |terms| {
        Polynomial::from_terms(n, terms.into_iter().map(|(e, re, im)| (MultiIndex::new(e), Complex64::new(re, im)))).unwrap()
    })
}

fn homogeneous(n: usize, m: u32) -> impl Strategy<Value = Polynomial> {
    let members = IndexSetSpec::full(n, m).enumerate().unwrap();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), members.len()).prop_map(move |c| {
        Polynomial::from_terms(n, members.iter().cloned().zip(c.into_iter().map(|(re, im)| Complex64::new(re, im)))).unwrap()
    })
}

fn ball_point(x: &LatticeSpec, raw: &[(f64, f64)]) -> Vec<Complex64> {
    let z: Vec<Complex64> = raw.iter().take(x.dimension()).map(|&(r, t)| Complex64::from_polar(r, TAU * t)).collect();
    let norm = x.norm(&z).unwrap();
    if norm > 1.0 {
        z.iter().map(|v| v / norm).collect()
    } else {
        z
    }
}

#[test]
fn monomial_sup_norms() {
    let b = Budget::default();
    // sup of z1 z2 over the ℓ_p ball is 2^{-2/p}
    for (p, want) in [(1.0, 0.25), (2.0, 0.5), (f64::INFINITY, 1.0)] {
        let poly = Polynomial::from_real(2, [(MultiIndex::new(vec![1, 1]), 1.0)]).unwrap();
        let s = sup_norm(&poly, &LatticeSpec::lp(p, 2), &b).unwrap();
        assert!(s.lo <= want * (1.0 + 1e-12) && s.hi >= want * (1.0 - 1e-12), "p={p}: [{}, {}]", s.lo, s.hi);
        assert!(s.width() <= 1e-5 * want);
    }
    let zero = Polynomial::zero(3);
    assert_eq!(sup_norm(&zero, &LatticeSpec::lp(2.0, 3), &b).unwrap().hi, 0.0);
    assert!(sup_norm(&zero, &LatticeSpec::lp(2.0, 2), &b).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn sup_norm_brackets_the_grid_oracle(n in 1usize..=2, which in 0usize..4, seed in 0u64..1000, poly1 in polynomial(1), poly2 in polynomial(2)) {
        let poly = if n == 1 { poly1 } else { poly2 };
        let x = lattices(n)[which];
        let b = sup_norm(&poly, &x, &Budget::default().with_seed(seed)).unwrap();
        prop_assert!(b.is_valid());
        let oracle = grid_oracle(&poly, &x);
        prop_assert!(oracle <= b.hi * (1.0 + 1e-9) + 1e-12, "{} > hi {} on {}", oracle, b.hi, x.label());
        prop_assert!(b.lo - 1e-6 * b.lo.max(1.0) <= oracle, "lo {} > oracle {} on {}", b.lo, oracle, x.label());
        let w = b.witness.as_ref().expect("witness");
        prop_assert!(x.norm(w).unwrap() <= 1.0 + 1e-9);
        prop_assert!(poly.evaluate(w).unwrap().norm() >= b.lo * (1.0 - 1e-9));
    }

    #[test]
    fn cauchy_inequality_for_homogeneous_parts(which in 0usize..4, poly in polynomial(2)) {
        let x = lattices(2)[which];
        let budget = Budget::default().with_restarts(8).with_iterations(100);
        let whole = sup_norm(&poly, &x, &budget).unwrap();
        for k in 0..=poly.degree().unwrap_or(0) {
            let part = sup_norm(&poly.homogeneous_part(k), &x, &budget).unwrap();
            prop_assert!(part.lo <= whole.hi * (1.0 + 1e-9), "k={} part {} whole {}", k, part.lo, whole.hi);
        }
    }

    #[test]
    fn polarization_inequality(m in 1u32..=4, which in 0usize..4, poly in homogeneous(2, 4), raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 8)) {
        let poly = poly.homogeneous_part(4);
        let poly = if m == 4 { poly } else {
            Polynomial::from_terms(2, poly.terms().filter(|(a, _)| a.exponents()[0] >= 4 - m).map(|(a, c)| {
                (MultiIndex::new(vec![a.exponents()[0] - (4 - m), a.exponents()[1]]), *c)
            })).unwrap()
        };
        prop_assume!(!poly.is_empty());
        let x = lattices(2)[which];
        let s = sup_norm(&poly, &x, &Budget::default().with_restarts(8).with_iterations(100)).unwrap();
        let points: Vec<Vec<Complex64>> = raw.chunks(2).take(m as usize).map(|c| ball_point(&x, c)).collect();
        let value = poly.polarization_eval(&points).unwrap().norm();
        let factor = f64::from(m).powi(m as i32) / (1..=m).map(f64::from).product::<f64>();
        prop_assert!(value <= factor * s.hi * (1.0 + 1e-9));
        let diag = poly.polarization_eval(&vec![points[0].clone(); m as usize]).unwrap();
        prop_assert!((diag - poly.evaluate(&points[0]).unwrap()).norm() <= 1e-12 * (1.0 + s.hi));
    }

    #[test]
    fn projection_is_idempotent_and_commutes(poly in polynomial(3), m in 0u32..=4, k in 0u32..=6) {
        let j = IndexSetSpec::full_up_to(3, m);
        let once = poly.project(&j).unwrap();
        prop_assert_eq!(once.project(&j).unwrap(), once.clone());
        prop_assert_eq!(once.homogeneous_part(k), poly.homogeneous_part(k).project(&j).unwrap());
        let total: usize = (0..=9).map(|d| poly.homogeneous_part(d).len()).sum();
        prop_assert_eq!(total, poly.len());
    }
}
