//! The polynomial projection constant
//! `λ̂(P_J(X_n)) = sup_{z∈B_X} Σ_{α∈J} c_X(α)|z^α|`.

use std::collections::BTreeMap;
use std::f64::consts::E;

use num_complex::Complex64;

use super::{best_upper, ChainEntry, ConstantReport, Quantity};
use crate::bracket::{Bracket, Budget};
use crate::certify;
use crate::characteristics::{char_interval, log_sup_monomial};
use crate::error::Result;
use crate::lattice::{conjugate, embedding_norm, Family, LatticeSpec};
use crate::multiindex::{IndexSetSpec, MultiIndex};
use crate::polynomials::Compiled;
use crate::search::{self, SearchSpec};

/// Members of `J` with their characteristic brackets, grouped by order.
pub(crate) struct Weighted {
    pub slices: BTreeMap<u32, Vec<(MultiIndex, f64, f64)>>,
}

impl Weighted {
    pub fn new(j: &IndexSetSpec, x: &LatticeSpec) -> Result<Self> {
        let mut slices: BTreeMap<u32, Vec<(MultiIndex, f64, f64)>> = BTreeMap::new();
        for alpha in j.enumerate()? {
            let (lo, hi) = char_interval(&alpha, x);
            slices.entry(alpha.order()).or_default().push((alpha, lo, hi));
        }
        Ok(Weighted { slices })
    }

    pub fn len(&self) -> usize {
        self.slices.values().map(Vec::len).sum()
    }

    fn terms(&self, hi: bool) -> Vec<(MultiIndex, f64)> {
        self.slices.values().flatten().map(|(a, lo, h)| (a.clone(), if hi { *h } else { *lo })).collect()
    }
}

fn ln_factorial(k: u32) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// `(Σ_α (c(α)(α!/k!)^{1/r})^{r′})^{1/r′}`: the supremum bound on `B_{ℓ_r}`
/// from Hölder's inequality and the multinomial identity.
fn holder_multinomial(slice: &[(MultiIndex, f64, f64)], k: u32, r: f64) -> f64 {
    let rc = conjugate(r);
    let lk = ln_factorial(k);
    let logs: Vec<f64> = slice
        .iter()
        .map(|(a, _, hi)| {
            let la: f64 = a.exponents().iter().map(|&e| ln_factorial(e)).sum();
            hi.ln() + if r.is_infinite() { 0.0 } else { (la - lk) / r }
        })
        .collect();
    if rc.is_infinite() {
        return logs.iter().copied().fold(f64::NEG_INFINITY, f64::max).exp();
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return 0.0;
    }
    let s: f64 = logs.iter().map(|l| ((l - top) * rc).exp()).sum();
    top.exp() * s.powf(1.0 / rc)
}

fn lr_exponents(x: &LatticeSpec) -> Vec<f64> {
    let mut rs = vec![1.0, 2.0, f64::INFINITY];
    let p = match x.family() {
        Family::Lp { p } => p,
        Family::Lorentz { p, .. } => p,
    };
    if !rs.contains(&p) {
        rs.push(p);
    }
    rs
}

/// Optimizer-free upper bound for one homogeneous slice, with the bounds
/// that entered it.
fn slice_upper(slice: &[(MultiIndex, f64, f64)], k: u32, x: &LatticeSpec, seed: u64) -> Result<Vec<ChainEntry>> {
    let mut chain = vec![ChainEntry::upper(format!("absolute_sum_cap_k{k}"), slice.iter().map(|(_, lo, hi)| hi / lo).sum())];
    if k == 0 {
        return Ok(chain);
    }
    let n = x.dimension();
    for r in lr_exponents(x) {
        let target = LatticeSpec::lp(r, n);
        let embed = if target == *x { 1.0 } else { embedding_norm(x, &target, seed)?.hi };
        let bound = embed.powi(k as i32) * holder_multinomial(slice, k, r);
        let label = if r.is_infinite() { "inf".to_string() } else { format!("{r}") };
        chain.push(ChainEntry::upper(format!("holder_multinomial_l{label}_k{k}"), bound));
    }
    let tetra = slice.iter().all(|(a, _, _)| a.is_tetrahedral());
    if tetra && k as usize <= n && x.is_symmetric() {
        if let (Some(dn), Some(dk)) = (x.dual_fundamental_function(n)?, x.dual_fundamental_function(k as usize)?) {
            chain.push(ChainEntry::upper(
                format!("tetrahedral_dual_fundamental_k{k}"),
                E.powi(k as i32) * (dn / dk).powi(k as i32),
            ));
        }
    }
    Ok(chain)
}

fn analytic_upper(w: &Weighted, x: &LatticeSpec, seed: u64) -> Result<(f64, Vec<ChainEntry>)> {
    let mut total = 0.0;
    let mut chain = Vec::new();
    for (&k, slice) in &w.slices {
        let entries = slice_upper(slice, k, x, seed)?;
        let (best, _) = best_upper(&entries);
        total += best;
        if w.slices.len() == 1 {
            chain.extend(entries);
        } else {
            chain.push(ChainEntry::term(format!("slice_best_k{k}"), best));
        }
    }
    if w.slices.len() > 1 {
        chain.push(ChainEntry::upper("slice_sum", total));
    }
    Ok((total * (1.0 + 1e-12), chain))
}

/// Optimizer-free upper bound for `λ̂(P_J(X_n))` with its bound chain.
pub fn lambda_hat_upper(j: &IndexSetSpec, x: &LatticeSpec) -> Result<(f64, Vec<ChainEntry>)> {
    let w = Weighted::new(j, x)?;
    analytic_upper(&w, x, 0)
}

fn flat_starts(n: usize, x: &LatticeSpec) -> Vec<Vec<Complex64>> {
    let norm = x.evaluator();
    let mut ks: Vec<usize> =
        if n <= 64 { (1..=n).collect() } else { (0..).map(|i| 1usize << i).take_while(|&k| k <= n).collect() };
    ks.push(n);
    ks.dedup();
    ks.into_iter()
        .map(|k| {
            let v = 1.0 / norm.flat(k);
            (0..n).map(|i| Complex64::new(if i < k { v } else { 0.0 }, 0.0)).collect()
        })
        .collect()
}

/// Sup of a nonnegative polynomial over the ball: searched lower end and,
/// in dimension at most 2, a certified cover.
pub(crate) fn positive_sup(
    n: usize,
    terms: &[(MultiIndex, f64)],
    x: &LatticeSpec,
    symmetric: bool,
    budget: &Budget,
) -> (f64, Option<f64>, Vec<Complex64>, u64) {
    let compiled = Compiled::from_real(n, terms);
    let restarts = (budget.restarts * 256 / terms.len().max(1)).clamp(4, budget.restarts.max(4));
    let mut starts = if symmetric { flat_starts(n, x) } else { Vec::new() };
    let mut heavy: Vec<&(MultiIndex, f64)> = terms.iter().filter(|(a, _)| !a.is_zero()).collect();
    heavy.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for (alpha, _) in heavy.into_iter().take(8) {
        starts.push(log_sup_monomial(alpha, x).point.into_iter().map(|r| Complex64::new(r, 0.0)).collect());
    }
    let spec = SearchSpec { poly: &compiled, lattice: x, positive: true, decreasing: symmetric, starts };
    let found = search::ascend(&spec, &(*budget).with_restarts(restarts));
    let (mut lo, mut point, mut evals) = (found.value, found.point, found.evaluations);
    let mut hi = None;
    if let Some(b) = certify::sup_bnb(&compiled, x, true, 1e-10, 200_000) {
        evals += b.cells;
        if b.lo > lo {
            lo = b.lo;
            point = b.point;
        }
        hi = Some(b.hi);
    }
    (lo, hi, point, evals)
}

fn compute(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<(Bracket, Vec<ChainEntry>)> {
    let n = x.dimension();
    if j.dimension() != n {
        return Err(crate::Error::DimensionMismatch { expected: n, got: j.dimension() });
    }
    let w = Weighted::new(j, x)?;
    if w.len() == 0 {
        return Ok((Bracket::exact(0.0, "empty index set"), Vec::new()));
    }
    let (analytic, mut chain) = analytic_upper(&w, x, budget.seed)?;
    let symmetric = j.is_symmetric() && x.is_symmetric();
    let (lo, _, point, evals) = positive_sup(n, &w.terms(false), x, symmetric, budget);
    chain.push(ChainEntry::lower("ball_search", lo));
    let mut hi = analytic;
    let mut method = String::from("positive ascent; analytic majorants");
    if n <= 2 {
        let compiled = Compiled::from_real(n, &w.terms(true));
        if let Some(b) = certify::sup_bnb(&compiled, x, true, 1e-10, 200_000) {
            chain.push(ChainEntry::upper("branch_and_bound_cover", b.hi));
            if b.hi < hi {
                hi = b.hi;
                method = String::from("positive ascent; branch-and-bound cover");
            }
        }
    }
    let (_, name) = best_upper(&chain);
    if !name.is_empty() && !method.contains("branch") {
        method = format!("positive ascent; {name}");
    }
    Ok((Bracket::new(lo, hi, method, evals).with_witness(point), chain))
}

/// Certified bracket for `λ̂(P_J(X_n))`.
///
/// The lower end is the searched sup of `Σ c_lo(α) z^α` over nonnegative `z`
/// in the ball. The upper end is the smallest of the absolute-sum cap
/// `Σ c_hi/c_lo`, Hölder–multinomial bounds through `ℓ_r` embeddings, the
/// tetrahedral fundamental-function bound `e^m (φ_{X′}(n)/φ_{X′}(m))^m`, and
/// in dimension at most 2 a certified branch-and-bound cover; for
/// non-homogeneous sets the slice bounds are summed.
pub fn lambda_hat(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<Bracket> {
    Ok(compute(j, x, budget)?.0)
}

/// [`lambda_hat`] with its bound chain.
pub fn lambda_hat_report(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<ConstantReport> {
    let (bracket, chain) = compute(j, x, budget)?;
    Ok(ConstantReport {
        quantity: Quantity::LambdaHat,
        index_set: j.clone(),
        lattice: *x,
        m: j.max_order(),
        bracket,
        chain,
        truncated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_forms_on_l2() {
        let b = lambda_hat(&IndexSetSpec::full(2, 1), &LatticeSpec::lp(2.0, 2), &Budget::default()).unwrap();
        assert!(b.contains(2f64.sqrt(), 1e-9) && b.width() < 1e-6, "{b:?}");
    }

    #[test]
    fn single_monomial_is_one() {
        let j = IndexSetSpec::explicit(3, vec![MultiIndex::new(vec![2, 1, 0])]).unwrap();
        for x in [LatticeSpec::lp(1.5, 3), LatticeSpec::lorentz(2.0, 1.0, 3), LatticeSpec::lorentz(2.0, 4.0, 3)] {
            let b = lambda_hat(&j, &x, &Budget::default()).unwrap();
            assert!(b.contains(1.0, 1e-9) && b.width() < 1e-6, "{x}: {b:?}");
        }
    }

    #[test]
    fn l1_full_degree_two() {
        let b = lambda_hat(&IndexSetSpec::full(2, 2), &LatticeSpec::lp(1.0, 2), &Budget::default()).unwrap();
        assert!(b.lo >= 1.0 && b.hi <= E * E, "{b:?}");
        // m^m/m! = 2 bounds the Hölder form
        assert!(b.hi <= 2.0 + 1e-9);
    }

    #[test]
    fn tetrahedral_bound_enters() {
        let x = LatticeSpec::lorentz(2.0, 1.0, 8);
        let (hi, chain) = lambda_hat_upper(&IndexSetSpec::tetra(8, 3), &x).unwrap();
        let cor = chain.iter().find(|c| c.name.starts_with("tetrahedral")).unwrap();
        assert!(hi <= cor.value * (1.0 + 1e-12));
    }
}
