//! Certified branch-and-bound for polynomial sup-norms in dimension at most 2.
//!
//! In dimension 2 the nonnegative part of the unit sphere is parametrized by
//! `s ∈ [0, 1] ↦ (1-s, s)/‖(1-s, s)‖`. By lattice monotonicity the first
//! modulus is nonincreasing and the second nondecreasing in `s`, so a cell
//! `[s_a, s_b]` pins both moduli to intervals read off its end points. The
//! phase dependence is bounded to second order: with `L_k = ∂P/∂θ_k` at the
//! cell center, `|P| ≤ max_δ |P_c + Σ L_k δ_k| + ½ Σ |c_α| ρ_c^α (Σ α_k h_k)²`
//! plus the modulus spread `Σ |c_α| |ρ^α - ρ_c^α|`, where `h_k` are the phase
//! half-widths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::lattice::{LatticeSpec, NormEvaluator};
use crate::polynomials::Compiled;

/// Largest term count for which the pairwise phase bound is used.
const PAIRWISE_TERMS: usize = 64;

/// Result of [`sup_bnb`].
#[derive(Clone, Debug)]
pub(crate) struct BnbOutcome {
    pub lo: f64,
    pub hi: f64,
    pub point: Vec<Complex64>,
    pub cells: u64,
}

/// Moduli of the sphere point with parameter `s`.
pub(crate) fn sphere_moduli(norm: &NormEvaluator, s: f64) -> [f64; 2] {
    let v = [1.0 - s, s];
    let r = norm.norm_abs(&v);
    [v[0] / r, v[1] / r]
}

struct Layout<'a> {
    poly: &'a Compiled,
    norm: NormEvaluator,
    abs: Vec<f64>,
    has_s: bool,
    radius: f64,
    /// Coordinates with a free phase.
    phases: Vec<usize>,
    positive: bool,
}

#[derive(Clone, Debug)]
struct Cell {
    lo: [f64; 3],
    hi: [f64; 3],
    upper: f64,
    errs: [f64; 3],
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper.total_cmp(&other.upper) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

impl Layout<'_> {
    fn dims(&self) -> usize {
        usize::from(self.has_s) + self.phases.len()
    }

    fn moduli(&self, s: f64) -> [f64; 2] {
        if self.has_s {
            sphere_moduli(&self.norm, s)
        } else {
            [self.radius, 0.0]
        }
    }

    /// Evaluates a cell, returning its center value and point.
    fn evaluate(&self, lo: [f64; 3], hi: [f64; 3]) -> (Cell, f64, Vec<Complex64>) {
        let n = self.poly.n;
        let off = usize::from(self.has_s);
        let (rmin, rmax, rc) = if self.has_s {
            let a = self.moduli(lo[0]);
            let b = self.moduli(hi[0]);
            let c = self.moduli(0.5 * (lo[0] + hi[0]));
            ([b[0], a[1]], [a[0], b[1]], c)
        } else {
            ([self.radius, 0.0], [self.radius, 0.0], [self.radius, 0.0])
        };
        let inflate = 1.0 + 1e-14;
        let mut theta = [0.0; 2];
        let mut half = [0.0; 2];
        for (j, &k) in self.phases.iter().enumerate() {
            theta[k] = 0.5 * (lo[off + j] + hi[off + j]);
            half[k] = 0.5 * (hi[off + j] - lo[off + j]);
        }
        let z: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(rc[k], theta[k])).collect();
        let center = self.poly.eval(&z);
        let value = if self.positive { center.re } else { center.norm() };
        let mut err_s = 0.0;
        let mut lin = [Complex64::new(0.0, 0.0); 2];
        let mut rem = 0.0;
        let mut rem_p = [0.0; 2];
        let mut pos_upper = 0.0;
        let mut weights = Vec::with_capacity(self.poly.len());
        for t in 0..self.poly.len() {
            let e = self.poly.term_exps(t);
            let (mut mx, mut mn, mut mc) = (1.0, 1.0, 1.0);
            for k in 0..n {
                if e[k] > 0 {
                    mx *= (rmax[k] * inflate).powi(e[k] as i32);
                    mn *= (rmin[k] / inflate).powi(e[k] as i32);
                    mc *= rc[k].powi(e[k] as i32);
                }
            }
            if self.positive {
                pos_upper += self.poly.coefs[t].re * mx;
                continue;
            }
            err_s += self.abs[t] * (mx - mc).max(mc - mn).max(0.0);
            let mut v = self.poly.coefs[t];
            for k in 0..n {
                if e[k] > 0 {
                    v *= z[k].powi(e[k] as i32);
                }
            }
            let spread: f64 = (0..n).map(|k| e[k] as f64 * half[k]).sum();
            let weight = self.abs[t] * mc * inflate;
            weights.push(weight);
            rem += 0.5 * weight * spread * spread;
            for k in 0..n {
                lin[k] += v * Complex64::new(0.0, e[k] as f64);
                rem_p[k] += 0.5 * weight * e[k] as f64 * half[k] * spread;
            }
        }
        let mut errs = [0.0; 3];
        let upper = if self.positive {
            errs[0] = pos_upper - value;
            pos_upper
        } else {
            // |P_c + Σ L_k δ_k| is convex in δ, so its maximum sits at a vertex
            let mut vertex = value;
            for mask in 0..(1u32 << self.phases.len()) {
                let mut w = center;
                for (j, &k) in self.phases.iter().enumerate() {
                    let sign = if mask >> j & 1 == 1 { -1.0 } else { 1.0 };
                    w += lin[k] * (sign * half[k]);
                }
                vertex = vertex.max(w.norm());
            }
            let mut phase_bound = vertex + rem;
            if !self.phases.is_empty() && self.poly.len() <= PAIRWISE_TERMS {
                // second order in |P|², where only exponent differences matter
                let mut sq = value * value;
                for &k in &self.phases {
                    sq += 2.0 * (center.conj() * lin[k]).re.abs() * half[k];
                }
                let mut curv = 0.0;
                for t in 0..self.poly.len() {
                    let et = self.poly.term_exps(t);
                    for u in 0..t {
                        let eu = self.poly.term_exps(u);
                        let d: f64 = (0..n).map(|k| (et[k] as f64 - eu[k] as f64).abs() * half[k]).sum();
                        curv += weights[t] * weights[u] * d * d;
                    }
                }
                sq += curv;
                phase_bound = phase_bound.min(sq.sqrt());
            }
            if self.has_s {
                errs[0] = err_s;
            }
            for (j, &k) in self.phases.iter().enumerate() {
                errs[off + j] = ((phase_bound - value).max(0.0)).min(lin[k].norm() * half[k] + rem_p[k]);
            }
            phase_bound + err_s
        };
        let upper = upper * (1.0 + 1e-12) + 1e-300;
        (Cell { lo, hi, upper, errs }, value, z)
    }
}

/// Certified bracket for `sup_{z∈B_X} |P(z)|` when `n ≤ 2`.
///
/// Stops once the relative gap drops below `rel_tol` or `max_cells` cells
/// have been split. Returns `None` in higher dimension.
pub(crate) fn sup_bnb(poly: &Compiled, x: &LatticeSpec, positive: bool, rel_tol: f64, max_cells: usize) -> Option<BnbOutcome> {
    let n = poly.n;
    if n == 0 || n > 2 || poly.len() == 0 {
        return None;
    }
    let norm = x.evaluator();
    let radius = 1.0 / norm.norm_abs(&[1.0]);
    let phases = if positive {
        vec![]
    } else if n == 1 {
        if poly.homogeneous {
            vec![]
        } else {
            vec![0]
        }
    } else if poly.homogeneous {
        vec![1]
    } else {
        vec![0, 1]
    };
    let layout = Layout { poly, norm, abs: poly.abs_coefs(), has_s: n == 2, radius, phases, positive };
    let dims = layout.dims();
    let mut lo_cell = [0.0; 3];
    let mut hi_cell = [0.0; 3];
    for d in 0..dims {
        let is_s = layout.has_s && d == 0;
        lo_cell[d] = 0.0;
        hi_cell[d] = if is_s { 1.0 } else { TAU };
    }
    // initial grid
    let mut pieces = vec![(lo_cell, hi_cell)];
    for d in 0..dims {
        let k = if layout.has_s && d == 0 { 32 } else { 8 };
        pieces = pieces
            .into_iter()
            .flat_map(|(l, h)| {
                (0..k).map(move |i| {
                    let (mut a, mut b) = (l, h);
                    let w = (h[d] - l[d]) / k as f64;
                    a[d] = l[d] + w * i as f64;
                    b[d] = if i + 1 == k { h[d] } else { l[d] + w * (i + 1) as f64 };
                    (a, b)
                })
            })
            .collect();
    }
    let mut heap = BinaryHeap::new();
    let mut best = f64::NEG_INFINITY;
    let mut best_point = vec![Complex64::new(0.0, 0.0); n];
    let mut cells = 0u64;
    for (l, h) in pieces {
        let (cell, v, z) = layout.evaluate(l, h);
        cells += 1;
        if v > best {
            best = v;
            best_point = z;
        }
        heap.push(cell);
    }
    let mut splits = 0usize;
    while let Some(top) = heap.peek() {
        if top.upper <= best + rel_tol * best.abs().max(1e-300) || splits >= max_cells || dims == 0 {
            break;
        }
        let cell = heap.pop().expect("nonempty heap");
        splits += 1;
        let d = (0..dims).max_by(|&a, &b| cell.errs[a].total_cmp(&cell.errs[b])).unwrap_or(0);
        let mid = 0.5 * (cell.lo[d] + cell.hi[d]);
        let (mut h1, mut l2) = (cell.hi, cell.lo);
        h1[d] = mid;
        l2[d] = mid;
        for (l, h) in [(cell.lo, h1), (l2, cell.hi)] {
            let (c, v, z) = layout.evaluate(l, h);
            cells += 1;
            if v > best {
                best = v;
                best_point = z;
            }
            if c.upper > best {
                heap.push(c);
            }
        }
    }
    let hi = heap.peek().map_or(best, |c| c.upper).max(best);
    Some(BnbOutcome { lo: best.max(0.0), hi, point: best_point, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    #[test]
    fn moduli_are_monotone() {
        let norm = LatticeSpec::lorentz(3.0, 1.5, 2).evaluator();
        let mut prev = sphere_moduli(&norm, 0.0);
        for i in 1..=100 {
            let cur = sphere_moduli(&norm, i as f64 / 100.0);
            assert!(cur[0] <= prev[0] + 1e-15 && cur[1] >= prev[1] - 1e-15);
            prev = cur;
        }
    }

    #[test]
    fn product_on_l2() {
        let p = Compiled::from_real(2, &[(MultiIndex::new(vec![1, 1]), 1.0)]);
        let b = sup_bnb(&p, &LatticeSpec::lp(2.0, 2), false, 1e-7, 200_000).unwrap();
        assert!(b.lo <= 0.5 + 1e-12 && b.hi >= 0.5 - 1e-12 && b.hi - b.lo < 1e-6, "{b:?}");
        let b = sup_bnb(&p, &LatticeSpec::lp(2.0, 2), true, 1e-10, 200_000).unwrap();
        assert!(b.hi - b.lo < 1e-8 && (b.lo - 0.5).abs() < 1e-8);
    }

    #[test]
    fn cancelling_terms() {
        // z1^2 - z2^2 on l_inf: sup is 2
        let p = Compiled::from_real(2, &[(MultiIndex::new(vec![2, 0]), 1.0), (MultiIndex::new(vec![0, 2]), -1.0)]);
        let b = sup_bnb(&p, &LatticeSpec::lp(f64::INFINITY, 2), false, 1e-9, 200_000).unwrap();
        assert!((b.lo - 2.0).abs() < 1e-6 && b.hi >= 2.0 - 1e-12, "{b:?}");
    }

    #[test]
    fn one_variable_phase() {
        // 1 + z on the unit disc: sup 2
        let p = Compiled::from_real(1, &[(MultiIndex::new(vec![0]), 1.0), (MultiIndex::new(vec![1]), 1.0)]);
        let b = sup_bnb(&p, &LatticeSpec::lp(2.0, 1), false, 1e-10, 100_000).unwrap();
        assert!((b.lo - 2.0).abs() < 1e-9 && b.hi - b.lo < 1e-8);
        // 1 - z attains 2 at z = -1
        let p = Compiled::from_real(1, &[(MultiIndex::new(vec![0]), 1.0), (MultiIndex::new(vec![1]), -1.0)]);
        let b = sup_bnb(&p, &LatticeSpec::lp(2.0, 1), false, 1e-10, 100_000).unwrap();
        assert!((b.lo - 2.0).abs() < 1e-9);
    }
}
