//! Unconditional basis constant of the monomials,
//! `χ_mon(P_J(X_n)) = sup ‖Σ ε_α c_α z^α‖ / ‖Σ c_α z^α‖`.
//!
//! Since the sup over unimodular `ε` of the numerator equals
//! `N(|c|) = sup_{z∈B_X} Σ |c_α||z^α|`, the constant is the sup over
//! coefficient vectors of `N(|c|)/‖P_c‖`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{E, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lambda_hat::{lambda_hat, lambda_hat_upper, positive_sup};
use super::{best_lower, best_upper, ChainEntry, ConstantReport, Quantity};
use crate::bracket::{stream_seed, Bracket, Budget};
use crate::certify::{self, sphere_moduli};
use crate::error::Result;
use crate::lattice::LatticeSpec;
use crate::multiindex::{binomial, class_size, reduce, IndexSetSpec, MultiIndex};
use crate::polynomials::Compiled;
use crate::tetra_average::{kappa, prime_count};

/// Sets larger than this skip the coefficient-search generators.
const SEARCH_MAX_TERMS: usize = 64;
/// Target gap of the coefficient-space branch-and-bound.
const TINY_TOLERANCE: f64 = 0.03;
/// Sign patterns are enumerated exhaustively up to this many terms.
const EXHAUSTIVE_SIGN_TERMS: usize = 10;

fn rank(members: &[MultiIndex]) -> usize {
    let mut rows: Vec<Vec<f64>> = members.iter().map(|a| a.exponents().iter().map(|&e| e as f64).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).max_by(|&a, &b| rows[a][c].abs().total_cmp(&rows[b][c].abs())) else {
            break;
        };
        if rows[piv][c].abs() < 1e-9 {
            continue;
        }
        rows.swap(r, piv);
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][c] / rows[r][c];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn is_full_slice(slice: &IndexSetSpec, n: usize, k: u32) -> bool {
    slice.cardinality() == binomial((n as u64 + k as u64).saturating_sub(1), k as u64)
}

fn is_tetra_slice(slice: &IndexSetSpec, n: usize, k: u32) -> Result<bool> {
    Ok(slice.cardinality() == binomial(n as u64, k as u64) && slice.is_tetrahedral_of_order(k)?)
}

/// Upper bound for the coefficient projection `Λ(k,n) → J(k)`.
fn projection_norm(slice: &IndexSetSpec, x: &LatticeSpec, k: u32) -> Result<f64> {
    let n = x.dimension();
    if is_full_slice(slice, n, k) {
        return Ok(1.0);
    }
    let via_lambda = lambda_hat_upper(slice, x)?.0;
    if is_tetra_slice(slice, n, k)? {
        return Ok(kappa(prime_count(k as usize)).powi(k as i32).min(via_lambda));
    }
    Ok(via_lambda)
}

/// Optimizer-free upper bounds for `χ_mon(P_J(X_n))`.
pub fn chi_mon_upper(j: &IndexSetSpec, x: &LatticeSpec) -> Result<(f64, Vec<ChainEntry>)> {
    let n = x.dimension();
    let members = j.enumerate()?;
    let size = members.len();
    let mut chain = vec![ChainEntry::upper("absolute_sum_cap", size as f64)];
    if size == 0 {
        return Ok((1.0, vec![ChainEntry::upper("empty_set", 1.0)]));
    }
    if rank(&members) == size {
        chain.push(ChainEntry::upper("phase_absorption", 1.0));
    }
    chain.push(ChainEntry::upper("projection_constant_hat", lambda_hat_upper(j, x)?.0));
    if !x.is_quasi_norm() {
        chain.push(ChainEntry::upper("parseval_sup_norm", (size as f64).sqrt()));
        let m = j.max_order();
        let homogeneous = members.iter().all(|a| a.order() == m);
        if homogeneous && m == 2 {
            chain.push(ChainEntry::upper("mixed_littlewood", 4.0 / PI.sqrt() * (n as f64).sqrt()));
        }
        if m >= 1 {
            let mut q_max: f64 = 0.0;
            let mut l_max: f64 = 0.0;
            for k in 1..=m {
                let slice = j.slice(k);
                if slice.cardinality() == 0u32.into() {
                    continue;
                }
                q_max = q_max.max(projection_norm(&slice, x, k)?);
                let reduced = reduce(&slice)?;
                l_max = l_max.max(lambda_hat_upper(&reduced, x)?.0);
            }
            let factor = if homogeneous { E * 2f64.powi(m as i32) } else { E * (m + 1) as f64 * 2f64.powi(m as i32) };
            chain.push(ChainEntry::upper("gordon_lewis_projection_chain", factor * q_max * l_max));
        }
    }
    let (best, _) = best_upper(&chain);
    Ok((best, chain))
}

/// Certified upper bound for `‖P‖` in dimension at most 2.
fn sup_upper(compiled: &Compiled, x: &LatticeSpec, rel_tol: f64, cells: usize) -> Option<f64> {
    certify::sup_bnb(compiled, x, false, rel_tol, cells).map(|b| b.hi)
}

/// Coefficient-search generators: random unimodular signs on fixed modulus
/// profiles, and real sign patterns at the normalized flat point.
fn search_generators(members: &[MultiIndex], x: &LatticeSpec, budget: &Budget, chain: &mut Vec<ChainEntry>) -> u64 {
    let n = x.dimension();
    let mut evals = 0u64;
    let mut profiles: Vec<(&str, Vec<f64>)> = vec![
        ("flat", vec![1.0; members.len()]),
        ("class_size_root", members.iter().map(|a| class_size(a).to_string().parse::<f64>().unwrap_or(1.0).sqrt()).collect()),
    ];
    if members.iter().any(|a| a.is_tetrahedral()) && members.iter().any(|a| !a.is_tetrahedral()) {
        profiles.push(("tetrahedral_ones", members.iter().map(|a| if a.is_tetrahedral() { 1.0 } else { 0.0 }).collect()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(budget.seed, 0xC41));
    let mut best_a: f64 = 0.0;
    for (_, profile) in &profiles {
        let terms: Vec<(MultiIndex, f64)> =
            members.iter().cloned().zip(profile.iter().copied()).filter(|(_, w)| *w > 0.0).collect();
        let (numerator, _, _, e) = positive_sup(n, &terms, x, false, &(*budget).with_restarts(8));
        evals += e;
        for _ in 0..16 {
            let coefs: Vec<(MultiIndex, Complex64)> =
                terms.iter().map(|(a, w)| (a.clone(), Complex64::from_polar(*w, rng.random::<f64>() * TAU))).collect();
            let compiled = Compiled::new(n, coefs);
            if let Some(hi) = sup_upper(&compiled, x, 1e-4, 20_000) {
                evals += 1;
                best_a = best_a.max(numerator / hi);
            }
        }
    }
    chain.push(ChainEntry::lower("coefficient_profile_search", best_a));

    // sign quotient at the normalized flat point
    let norm = x.evaluator();
    let z0 = 1.0 / norm.flat(n);
    let numerator: f64 = members.iter().map(|a| z0.powi(a.order() as i32)).sum();
    let t = members.len();
    let eval_signs = |signs: &[f64]| -> f64 {
        let compiled = Compiled::new(n, members.iter().cloned().zip(signs.iter().map(|&s| Complex64::new(s, 0.0))));
        sup_upper(&compiled, x, 1e-4, 20_000).unwrap_or(f64::INFINITY)
    };
    let mut best_den = f64::INFINITY;
    if t <= EXHAUSTIVE_SIGN_TERMS {
        // a global sign flip leaves the norm unchanged
        for mask in 0u32..(1 << (t - 1)) {
            let signs: Vec<f64> = (0..t).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect();
            best_den = best_den.min(eval_signs(&signs));
            evals += 1;
        }
    } else {
        let mut starts = Vec::new();
        for _ in 0..512 {
            let signs: Vec<f64> = (0..t).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
            let v = eval_signs(&signs);
            evals += 1;
            starts.push((v, signs));
        }
        starts.sort_by(|a, b| a.0.total_cmp(&b.0));
        best_den = starts[0].0;
        let (mut cur_v, mut cur) = starts.swap_remove(0);
        for _ in 0..64 {
            let mut improved = false;
            for i in 0..t {
                cur[i] = -cur[i];
                let v = eval_signs(&cur);
                evals += 1;
                if v < cur_v {
                    cur_v = v;
                    improved = true;
                    break;
                }
                cur[i] = -cur[i];
            }
            if !improved {
                break;
            }
        }
        best_den = best_den.min(cur_v);
    }
    if best_den.is_finite() {
        chain.push(ChainEntry::lower("sign_quotient_flat_point", numerator / best_den));
    }
    evals
}

struct TinyBox {
    lo: [f64; 3],
    hi: [f64; 3],
    face: usize,
    upper: f64,
    z: Vec<Complex64>,
}

impl PartialEq for TinyBox {
    fn eq(&self, o: &Self) -> bool {
        self.upper.total_cmp(&o.upper) == Ordering::Equal
    }
}
impl Eq for TinyBox {}
impl PartialOrd for TinyBox {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for TinyBox {
    fn cmp(&self, o: &Self) -> Ordering {
        self.upper.total_cmp(&o.upper)
    }
}

/// Branch-and-bound over coefficient space for tiny instances (`n ≤ 2`,
/// at most three free parameters after normalizing the largest modulus to 1
/// and absorbing the phases of a basis subset into the torus action).
struct Tiny<'a> {
    members: &'a [MultiIndex],
    x: &'a LatticeSpec,
    /// Terms whose phase is free.
    free_phases: Vec<usize>,
    /// `ρ_max^α` per covering cell and term.
    majorant: Vec<Vec<f64>>,
    /// Grid of sphere points with their monomial values.
    grid: Vec<(Vec<Complex64>, Vec<Complex64>)>,
    /// Sphere points on the coordinate axes.
    vertices: Vec<Vec<Complex64>>,
}

impl<'a> Tiny<'a> {
    fn new(members: &'a [MultiIndex], x: &'a LatticeSpec) -> Option<Self> {
        let n = x.dimension();
        let t = members.len();
        if n > 2 || t < 2 {
            return None;
        }
        // basis subset by greedy rank growth
        let mut basis: Vec<usize> = Vec::new();
        for i in 0..t {
            let mut trial: Vec<MultiIndex> = basis.iter().map(|&b| members[b].clone()).collect();
            trial.push(members[i].clone());
            if rank(&trial) == trial.len() {
                basis.push(i);
            }
        }
        let free_phases: Vec<usize> = (0..t).filter(|i| !basis.contains(i)).collect();
        if (t - 1) + free_phases.len() > 3 || free_phases.is_empty() {
            return None;
        }
        let norm = x.evaluator();
        let homogeneous = members.iter().all(|a| a.order() == members[0].order());
        let inflate = 1.0 + 1e-14;
        let mut majorant = Vec::new();
        let mut grid = Vec::new();
        let mono = |z: &[Complex64]| -> Vec<Complex64> {
            members
                .iter()
                .map(|a| a.exponents().iter().zip(z).fold(Complex64::new(1.0, 0.0), |acc, (&e, zi)| acc * zi.powu(e)))
                .collect()
        };
        if n == 1 {
            let r = 1.0 / norm.norm_abs(&[1.0]);
            majorant.push(members.iter().map(|a| (r * inflate).powi(a.order() as i32)).collect());
            for i in 0..256 {
                let z = vec![Complex64::from_polar(r, TAU * i as f64 / 256.0)];
                grid.push((mono(&z), z));
            }
        } else {
            let cells = 2048;
            for g in 0..cells {
                let a = sphere_moduli(&norm, g as f64 / cells as f64);
                let b = sphere_moduli(&norm, (g + 1) as f64 / cells as f64);
                let rmax = [a[0] * inflate, b[1] * inflate];
                majorant.push(
                    members.iter().map(|al| al.exponents().iter().zip(&rmax).map(|(&e, r)| r.powi(e as i32)).product()).collect(),
                );
            }
            let (ns, nt) = if homogeneous { (48, 48) } else { (24, 24) };
            for si in 0..=ns {
                let rho = sphere_moduli(&norm, si as f64 / ns as f64);
                for t1 in 0..(if homogeneous { 1 } else { nt }) {
                    for t2 in 0..nt {
                        let z = vec![
                            Complex64::from_polar(rho[0], TAU * t1 as f64 / nt as f64),
                            Complex64::from_polar(rho[1], TAU * t2 as f64 / nt as f64),
                        ];
                        grid.push((mono(&z), z));
                    }
                }
            }
        }
        let vertices = (0..n)
            .map(|k| {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                let r = 1.0 / norm.norm_abs(&e);
                (0..n).map(|i| Complex64::new(if i == k { r } else { 0.0 }, 0.0)).collect()
            })
            .collect();
        Some(Tiny { members, x, free_phases, majorant, grid, vertices })
    }

    fn dims(&self) -> usize {
        self.members.len() - 1 + self.free_phases.len()
    }

    /// Moduli, phases and their half-widths for a box on face `face`.
    fn decode(&self, lo: &[f64; 3], hi: &[f64; 3], face: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let t = self.members.len();
        let mut w = vec![1.0; t];
        let mut w_hi = vec![1.0; t];
        let mut hw = vec![0.0; t];
        let mut phi = vec![0.0; t];
        let mut hphi = vec![0.0; t];
        let mut d = 0;
        for i in 0..t {
            if i == face {
                continue;
            }
            w[i] = 0.5 * (lo[d] + hi[d]);
            w_hi[i] = hi[d];
            hw[i] = 0.5 * (hi[d] - lo[d]);
            d += 1;
        }
        for &i in &self.free_phases {
            phi[i] = 0.5 * (lo[d] + hi[d]);
            hphi[i] = 0.5 * (hi[d] - lo[d]);
            d += 1;
        }
        (w, w_hi, hw, phi, hphi)
    }

    fn numerator_upper(&self, w: &[f64]) -> f64 {
        self.majorant.iter().map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()).fold(0.0, f64::max)
    }

    fn coefs(w: &[f64], phi: &[f64]) -> Vec<Complex64> {
        w.iter().zip(phi).map(|(&r, &p)| Complex64::from_polar(r, p)).collect()
    }

    fn value_at(&self, c: &[Complex64], z: &[Complex64]) -> (Complex64, Vec<f64>) {
        let mono: Vec<Complex64> = self
            .members
            .iter()
            .map(|a| a.exponents().iter().zip(z).fold(Complex64::new(1.0, 0.0), |acc, (&e, zi)| acc * zi.powu(e)))
            .collect();
        let v = mono.iter().zip(c).map(|(m, ci)| m * ci).sum();
        (v, mono.iter().map(|m| m.norm()).collect())
    }

    /// Best grid point for `P_c`, refined by coordinate steps on the sphere.
    /// Best of the refined grid maximizer and the refined parent point.
    fn best_point(&self, c: &[Complex64], hint: Option<&[Complex64]>) -> Vec<Complex64> {
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for (mono, z) in &self.grid {
            let v: Complex64 = mono.iter().zip(c).map(|(m, ci)| m * ci).sum();
            if v.norm() > best.0 {
                best = (v.norm(), z.clone());
            }
        }
        let from_grid = self.refine(c, best.1);
        match hint {
            Some(h) => {
                let from_hint = self.refine(c, h.to_vec());
                if self.value_at(c, &from_hint).0.norm() > self.value_at(c, &from_grid).0.norm() {
                    from_hint
                } else {
                    from_grid
                }
            }
            None => from_grid,
        }
    }

    fn refine(&self, c: &[Complex64], z: Vec<Complex64>) -> Vec<Complex64> {
        let n = z.len();
        let norm = self.x.evaluator();
        let to_params = |z: &[Complex64]| -> Vec<f64> {
            let mut p = Vec::new();
            if n == 2 {
                let (a, b) = (z[0].norm(), z[1].norm());
                p.push(if a + b > 0.0 { b / (a + b) } else { 0.5 });
            }
            p.extend(z.iter().map(|zi| zi.arg()));
            p
        };
        let from_params = |p: &[f64]| -> Vec<Complex64> {
            if n == 2 {
                let rho = sphere_moduli(&norm, p[0].clamp(0.0, 1.0));
                vec![Complex64::from_polar(rho[0], p[1]), Complex64::from_polar(rho[1], p[2])]
            } else {
                let r = 1.0 / norm.norm_abs(&[1.0]);
                vec![Complex64::from_polar(r, p[0])]
            }
        };
        let mut p = to_params(&z);
        let mut f = self.value_at(c, &from_params(&p)).0.norm();
        let mut step = 0.02;
        while step > 1e-7 {
            let mut moved = false;
            for d in 0..p.len() {
                for s in [step, -step] {
                    let mut q = p.clone();
                    q[d] += s;
                    if n == 2 && d == 0 {
                        q[0] = q[0].clamp(0.0, 1.0);
                    }
                    let v = self.value_at(c, &from_params(&q)).0.norm();
                    if v > f {
                        f = v;
                        p = q;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        from_params(&p)
    }

    fn evaluate(&self, lo: [f64; 3], hi: [f64; 3], face: usize, hint: Option<&[Complex64]>) -> TinyBox {
        let (w, w_hi, hw, phi, hphi) = self.decode(&lo, &hi, face);
        let c = Self::coefs(&w, &phi);
        let z = self.best_point(&c, hint);
        let d_lo = std::iter::once(&z)
            .chain(&self.vertices)
            .map(|p| {
                let (v, mods) = self.value_at(&c, p);
                let slack: f64 = (0..w.len()).map(|i| (hw[i] + w_hi[i] * hphi[i]) * mods[i]).sum();
                v.norm() - slack
            })
            .fold(f64::NEG_INFINITY, f64::max)
            * (1.0 - 1e-12);
        let upper = if d_lo > 0.0 { self.numerator_upper(&w_hi) / d_lo } else { f64::INFINITY };
        TinyBox { lo, hi, face, upper, z }
    }

    /// Certified lower bound at the center of a box.
    fn certified_ratio(&self, b: &TinyBox, budget: &Budget) -> f64 {
        let n = self.x.dimension();
        let (w, _, _, phi, _) = self.decode(&b.lo, &b.hi, b.face);
        let terms: Vec<(MultiIndex, f64)> = self.members.iter().cloned().zip(w.iter().copied()).collect();
        let (num, _, _, _) = positive_sup(n, &terms, self.x, false, &(*budget).with_restarts(4));
        let compiled = Compiled::new(n, self.members.iter().cloned().zip(Self::coefs(&w, &phi)));
        match sup_upper(&compiled, self.x, 1e-7, 100_000) {
            Some(d) if d > 0.0 => num / d,
            _ => 1.0,
        }
    }

    fn run(&self, budget: &Budget, start_lower: f64, tol: f64, max_boxes: usize) -> (f64, f64, u64) {
        let dims = self.dims();
        let t = self.members.len();
        let mut heap = BinaryHeap::new();
        let mut boxes = 0u64;
        let mut lower: f64 = start_lower.max(1.0);
        for face in 0..t {
            let mut pieces = vec![([0.0; 3], [0.0; 3])];
            for d in 0..dims {
                let is_phase = d >= t - 1;
                let first_phase = d == t - 1;
                let top = if !is_phase {
                    1.0
                } else if first_phase {
                    PI
                } else {
                    TAU
                };
                pieces = pieces
                    .into_iter()
                    .flat_map(|(l, h)| {
                        (0..4).map(move |i| {
                            let (mut a, mut b) = (l, h);
                            a[d] = top * i as f64 / 4.0;
                            b[d] = top * (i + 1) as f64 / 4.0;
                            (a, b)
                        })
                    })
                    .collect();
            }
            for (l, h) in pieces {
                // boxes on this face may not exceed modulus 1 elsewhere
                heap.push(self.evaluate(l, h, face, None));
                boxes += 1;
            }
        }
        let mut checked = 0;
        while let Some(top) = heap.peek() {
            if top.upper <= lower + tol || boxes as usize >= max_boxes {
                break;
            }
            let cell = heap.pop().expect("nonempty heap");
            if checked < 64 && cell.upper.is_finite() {
                let (w, _, _, phi, _) = self.decode(&cell.lo, &cell.hi, cell.face);
                let c = Self::coefs(&w, &phi);
                let terms: Vec<f64> = w.clone();
                let est =
                    self.majorant.iter().map(|row| row.iter().zip(&terms).map(|(a, b)| a * b).sum::<f64>()).fold(0.0, f64::max)
                        / self.value_at(&c, &cell.z).0.norm();
                if est > lower * (1.0 + 1e-3) && cell.hi.iter().zip(&cell.lo).take(dims).all(|(h, l)| h - l < 0.1) {
                    lower = lower.max(self.certified_ratio(&cell, budget));
                    checked += 1;
                }
            }
            let d = (0..dims)
                .max_by(|&a, &b| {
                    let wa = (cell.hi[a] - cell.lo[a]) / if a >= t - 1 { PI } else { 1.0 };
                    let wb = (cell.hi[b] - cell.lo[b]) / if b >= t - 1 { PI } else { 1.0 };
                    wa.total_cmp(&wb)
                })
                .unwrap_or(0);
            let mid = 0.5 * (cell.lo[d] + cell.hi[d]);
            let (mut h1, mut l2) = (cell.hi, cell.lo);
            h1[d] = mid;
            l2[d] = mid;
            for (l, h) in [(cell.lo, h1), (l2, cell.hi)] {
                let b = self.evaluate(l, h, cell.face, Some(&cell.z));
                boxes += 1;
                if b.upper > lower {
                    heap.push(b);
                }
            }
        }
        let upper = heap.peek().map_or(lower, |b| b.upper).max(lower);
        (lower, upper, boxes)
    }
}

fn compute(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<(Bracket, Vec<ChainEntry>)> {
    let n = x.dimension();
    if j.dimension() != n {
        return Err(crate::Error::DimensionMismatch { expected: n, got: j.dimension() });
    }
    let members = j.enumerate()?;
    if members.len() <= 1 {
        let chain = vec![ChainEntry::upper("single_monomial", 1.0), ChainEntry::lower("trivial", 1.0)];
        return Ok((Bracket::exact(1.0, "single monomial"), chain));
    }
    let (_, mut chain) = chi_mon_upper(j, x)?;
    chain.push(ChainEntry::lower("trivial", 1.0));
    let mut evals = 0u64;
    if best_upper(&chain).0 > 1.0 {
        if n <= 2 {
            if members.len() <= 16 {
                chain.push(ChainEntry::upper("projection_constant_hat_certified", lambda_hat(j, x, budget)?.hi));
            }
            if members.len() <= SEARCH_MAX_TERMS {
                evals += search_generators(&members, x, budget, &mut chain);
            }
        }
        if let Some(tiny) = Tiny::new(&members, x) {
            let (lo, hi, boxes) = tiny.run(budget, best_lower(&chain).0, TINY_TOLERANCE, 2_000_000);
            evals += boxes;
            chain.push(ChainEntry::lower("coefficient_branch_and_bound", lo));
            chain.push(ChainEntry::upper("coefficient_branch_and_bound", hi));
        }
    }
    let (hi, hi_name) = best_upper(&chain);
    let (lo, lo_name) = best_lower(&chain);
    let method = format!("lower: {lo_name}; upper: {hi_name}");
    Ok((Bracket::new(lo.min(hi), hi, method, evals), chain))
}

/// Certified bracket for `χ_mon(P_J(X_n))`.
///
/// Lower ends: 1, coefficient-profile ratios `N(|c|)/‖P_c‖` with the
/// certified sup-norm in the denominator, the sign quotient at the flat
/// point, and a coefficient-space branch-and-bound for tiny instances.
/// Upper ends: `|J|`, `λ̂(P_J)`, phase absorption for linearly independent
/// exponents, and on normed lattices the projection chain
/// `e(m+1)2^m max‖Q‖ max λ̂(J(k)^♭)`, Parseval's `√|J|` and the mixed
/// Littlewood bound `(4/√π)√n` for 2-homogeneous sets (transferred from
/// `ℓ_∞` by lattice monotonicity).
pub fn chi_mon_bracket(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<Bracket> {
    Ok(compute(j, x, budget)?.0)
}

/// [`chi_mon_bracket`] with its bound chain.
pub fn chi_mon_report(j: &IndexSetSpec, x: &LatticeSpec, budget: &Budget) -> Result<ConstantReport> {
    let (bracket, chain) = compute(j, x, budget)?;
    Ok(ConstantReport {
        quantity: Quantity::ChiMon,
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
    fn trivial_cases() {
        let b = Budget::default();
        let single = IndexSetSpec::explicit(2, vec![MultiIndex::new(vec![1, 1])]).unwrap();
        assert_eq!(chi_mon_bracket(&single, &LatticeSpec::lp(2.0, 2), &b).unwrap().hi, 1.0);
        for x in [LatticeSpec::lp(1.0, 3), LatticeSpec::lorentz(2.0, 1.0, 3), LatticeSpec::lorentz(2.0, 4.0, 3)] {
            let c = chi_mon_bracket(&IndexSetSpec::full(3, 1), &x, &b).unwrap();
            assert!(c.lo == 1.0 && c.hi == 1.0, "{x}: {c:?}");
        }
    }

    #[test]
    fn rank_examples() {
        let m = |v: &[u32]| MultiIndex::new(v.to_vec());
        assert_eq!(rank(&[m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]), 2);
        assert_eq!(rank(&[m(&[2, 0]), m(&[0, 2])]), 2);
        assert_eq!(rank(&[m(&[0, 0]), m(&[1, 0])]), 1);
    }

    #[test]
    fn two_homogeneous_on_bidisc() {
        let c = chi_mon_bracket(&IndexSetSpec::full(2, 2), &LatticeSpec::lp(f64::INFINITY, 2), &Budget::default()).unwrap();
        assert!(c.lo >= 1.2, "{c:?}");
        assert!(c.width() <= 0.05, "{c:?}");
    }
}
