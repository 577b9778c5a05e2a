//! Combinatorial invariants of index sets against brute-force oracles.

use std::collections::BTreeSet;

use bpl_core::multiindex::{binomial, class_size, jmode, jmode_inverse, parity_split, reduce, reduce_jmode};
use bpl_core::{IndexSetSpec, MultiIndex};
use num_bigint::BigUint;
use proptest::prelude::*;

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of distinct orderings of a tuple, by enumerating all orderings.
fn distinct_permutations(tuple: &[usize]) -> usize {
    fn walk(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if rest.is_empty() {
            out.insert(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            walk(rest, prefix, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = BTreeSet::new();
    walk(&mut tuple.to_vec(), &mut Vec::new(), &mut out);
    out.len()
}

fn arb_alpha(max_n: usize, max_entry: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max_entry, 1..=max_n).prop_map(MultiIndex::new)
}

#[test]
fn cardinalities_match_binomials_and_enumeration() {
    for n in 1..=8usize {
        for m in 0..=8u32 {
            let full = IndexSetSpec::full(n, m);
            let want = binom((n + m as usize - 1) as u64, m as u64);
            assert_eq!(full.cardinality(), BigUint::from(want));
            assert_eq!(full.enumerate().unwrap().len() as u64, want);
            let tetra = IndexSetSpec::tetra(n, m);
            assert_eq!(tetra.cardinality(), BigUint::from(binom(n as u64, m as u64)));
            assert_eq!(tetra.enumerate().unwrap().len() as u64, binom(n as u64, m as u64));
        }
    }
}

#[test]
fn class_sizes_count_tuple_orderings() {
    for n in 1..=6usize {
        for m in 0..=6u32 {
            for a in IndexSetSpec::full(n, m).enumerate().unwrap() {
                assert_eq!(class_size(&a), BigUint::from(distinct_permutations(&jmode(&a))), "{a}");
            }
        }
    }
}

#[test]
fn support_levels_partition_the_full_set() {
    for n in 1..=6usize {
        for m in 1..=6u32 {
            let total: BigUint = (1..=m).map(|l| IndexSetSpec::support_level(n, m, l).cardinality()).sum();
            assert_eq!(total, IndexSetSpec::full(n, m).cardinality(), "n={n} m={m}");
        }
    }
}

#[test]
fn support_level_cardinality() {
    // L coordinates chosen, then a composition of m into L positive parts
    for n in 1..=8usize {
        for m in 1..=n as u32 {
            for l in 1..=m {
                let card = IndexSetSpec::support_level(n, m, l).cardinality();
                let supports = binom(n as u64, l as u64);
                assert_eq!(card, BigUint::from(supports * binom(m as u64 - 1, l as u64 - 1)));
                assert!(card >= BigUint::from(supports));
                assert!(card <= BigUint::from(supports) * (BigUint::from(1u32) << (m - 1)));
            }
        }
    }
    // the decreasing-rearrangement count alone undercounts: two members, one pattern
    assert_eq!(IndexSetSpec::support_level(2, 3, 2).cardinality(), BigUint::from(2u32));
}

#[test]
fn reduce_full_is_full_of_lower_order() {
    for n in 1..=6usize {
        for m in 1..=6u32 {
            let lower = IndexSetSpec::full(n, m - 1).enumerate().unwrap();
            let full = IndexSetSpec::full(n, m);
            assert_eq!(reduce(&full).unwrap().enumerate().unwrap(), lower);
            let generic = IndexSetSpec::explicit(n, full.enumerate().unwrap()).unwrap();
            assert_eq!(reduce(&generic).unwrap().enumerate().unwrap(), lower);
        }
    }
}

#[test]
fn worked_examples() {
    let mi = |v: &[u32]| MultiIndex::new(v.to_vec());
    let labels = |j: &IndexSetSpec| j.enumerate().unwrap().iter().map(|a| a.to_string()).collect::<Vec<_>>();
    assert_eq!(labels(&IndexSetSpec::full(2, 2)), ["(0,2)", "(1,1)", "(2,0)"]);
    assert_eq!(labels(&IndexSetSpec::tetra(3, 2)), ["(0,1,1)", "(1,0,1)", "(1,1,0)"]);
    assert_eq!(labels(&IndexSetSpec::support_level(2, 3, 1)), ["(0,3)", "(3,0)"]);
    assert_eq!(IndexSetSpec::support_level(3, 4, 2).cardinality(), BigUint::from(9u32));
    assert_eq!(class_size(&mi(&[2, 2, 1])), BigUint::from(30u32));
    let single = IndexSetSpec::explicit(2, vec![mi(&[2, 1])]).unwrap();
    assert_eq!(reduce(&single).unwrap().enumerate().unwrap(), vec![mi(&[1, 1]), mi(&[2, 0])]);
    assert_eq!(parity_split(&mi(&[3, 2, 1])), (mi(&[1, 0, 1]), mi(&[2, 2, 0])));
    assert_eq!(jmode(&mi(&[2, 0, 1])), vec![1, 1, 3]);
    assert_eq!(jmode_inverse(&[1, 2, 2], 3).unwrap(), mi(&[1, 2, 0]));
    assert_eq!(binomial(10, 3), BigUint::from(120u32));
}

proptest! {
    #[test]
    fn jmode_round_trip(alpha in arb_alpha(6, 4)) {
        let n = alpha.dimension();
        prop_assert_eq!(jmode_inverse(&jmode(&alpha), n).unwrap(), alpha.clone());
        prop_assert_eq!(jmode(&alpha).len() as u32, alpha.order());
    }

    #[test]
    fn parity_parts_recombine(alpha in arb_alpha(6, 6)) {
        let (t, e) = parity_split(&alpha);
        prop_assert!(t.is_tetrahedral() && e.is_even());
        prop_assert_eq!(t.add(&e), alpha.clone());
        let m = alpha.order();
        let bound = (BigUint::from(1u32) << m) * class_size(&t) * class_size(&e);
        prop_assert!(class_size(&alpha) <= bound);
    }

    #[test]
    fn reduce_modes_agree(members in prop::collection::btree_set(prop::collection::vec(0u32..=3, 3), 1..8), m in 1u32..=4) {
        // lift arbitrary vectors to order m by adjusting the first coordinate
        let lifted: Vec<MultiIndex> = members
            .into_iter()
            .filter(|v| v[1] + v[2] <= m)
            .map(|v| MultiIndex::new(vec![m - v[1] - v[2], v[1], v[2]]))
            .collect();
        prop_assume!(!lifted.is_empty());
        let j = IndexSetSpec::explicit(3, lifted).unwrap();
        prop_assert_eq!(reduce(&j).unwrap().enumerate().unwrap(), reduce_jmode(&j).unwrap().enumerate().unwrap());
    }

    #[test]
    fn cardinality_matches_enumeration(n in 1usize..=6, m in 0u32..=6, which in 0usize..5) {
        let j = match which {
            0 => IndexSetSpec::full(n, m),
            1 => IndexSetSpec::full_up_to(n, m),
            2 => IndexSetSpec::tetra(n, m),
            3 => IndexSetSpec::tetra_up_to(n, m),
            _ => IndexSetSpec::even(n, 2 * (m / 2)),
        };
        let members = j.enumerate().unwrap();
        prop_assert_eq!(j.cardinality(), BigUint::from(members.len()));
        prop_assert!(members.iter().all(|a| j.contains(a)));
        prop_assert!(members.windows(2).all(|w| w[0] < w[1]));
    }
}
