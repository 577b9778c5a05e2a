//! Multi-start projected ascent of `|P|` over the unit sphere of a lattice.
//!
//! Points are kept in polar form `z_k = ρ_k e^{iθ_k}`; after every step the
//! moduli are rescaled onto the sphere. By the maximum modulus principle the
//! supremum over the ball is attained on the sphere.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bracket::{stream_seed, Budget};
use crate::lattice::{LatticeSpec, NormEvaluator};
use crate::polynomials::Compiled;

/// Problem description for [`ascend`].
pub(crate) struct SearchSpec<'a> {
    pub poly: &'a Compiled,
    pub lattice: &'a LatticeSpec,
    /// Nonnegative real coefficients: search over nonnegative reals only.
    pub positive: bool,
    /// Restrict to decreasing moduli (valid for symmetric positive problems).
    pub decreasing: bool,
    /// Structured starting points, tried before random ones.
    pub starts: Vec<Vec<Complex64>>,
}

/// Best point found.
#[derive(Clone, Debug)]
pub(crate) struct SearchOutcome {
    pub value: f64,
    pub point: Vec<Complex64>,
    pub evaluations: u64,
}

struct State {
    rho: Vec<f64>,
    theta: Vec<f64>,
}

impl State {
    fn point(&self) -> Vec<Complex64> {
        self.rho.iter().zip(&self.theta).map(|(&r, &t)| Complex64::from_polar(r, t)).collect()
    }
}

fn project(rho: &mut [f64], norm: &NormEvaluator, decreasing: bool) -> bool {
    for r in rho.iter_mut() {
        if !(*r > 0.0) {
            *r = 0.0;
        }
    }
    if decreasing {
        rho.sort_by(|a, b| b.partial_cmp(a).unwrap());
    }
    let s = norm.norm_abs(rho);
    if !(s > 0.0) || !s.is_finite() {
        return false;
    }
    rho.iter_mut().for_each(|r| *r /= s);
    true
}

fn objective(spec: &SearchSpec, st: &State) -> f64 {
    if spec.positive {
        let z: Vec<Complex64> = st.rho.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        spec.poly.eval(&z).re
    } else {
        spec.poly.eval(&st.point()).norm()
    }
}

/// Gradient of `Re P` (positive mode) or `|P|²` in the `(ρ, θ)` coordinates.
fn gradient(spec: &SearchSpec, st: &State, grad: &mut [Complex64], g_rho: &mut [f64], g_theta: &mut [f64]) {
    let z = st.point();
    let p = spec.poly.eval_grad(&z, grad);
    for k in 0..z.len() {
        let unit = Complex64::from_polar(1.0, st.theta[k]);
        if spec.positive {
            g_rho[k] = (grad[k] * unit).re;
            g_theta[k] = 0.0;
        } else {
            g_rho[k] = 2.0 * (p.conj() * grad[k] * unit).re;
            g_theta[k] = 2.0 * (p.conj() * grad[k] * z[k] * Complex64::new(0.0, 1.0)).re;
        }
    }
}

fn climb(spec: &SearchSpec, norm: &NormEvaluator, start: &[Complex64], budget: &Budget) -> SearchOutcome {
    let n = spec.poly.n;
    let mut st = State {
        rho: start.iter().map(|z| z.norm()).collect(),
        theta: start.iter().map(|z| if spec.positive { 0.0 } else { z.arg() }).collect(),
    };
    if !project(&mut st.rho, norm, spec.decreasing) {
        st.rho = vec![1.0; n];
        project(&mut st.rho, norm, spec.decreasing);
    }
    let mut f = objective(spec, &st);
    let mut evals = 1u64;
    let mut grad = vec![Complex64::new(0.0, 0.0); n];
    let mut g_rho = vec![0.0; n];
    let mut g_theta = vec![0.0; n];
    let mut eta = 0.25;
    for _ in 0..budget.iterations {
        gradient(spec, &st, &mut grad, &mut g_rho, &mut g_theta);
        evals += 1;
        let scale = g_rho.iter().chain(&g_theta).fold(0.0f64, |m, g| m.max(g.abs()));
        if !(scale > 0.0) {
            break;
        }
        let mut moved = false;
        while eta >= budget.tolerance {
            let mut trial = State {
                rho: st.rho.iter().zip(&g_rho).map(|(r, g)| r + eta * g / scale).collect(),
                theta: st.theta.iter().zip(&g_theta).map(|(t, g)| t + eta * g / scale).collect(),
            };
            if project(&mut trial.rho, norm, spec.decreasing) {
                let ft = objective(spec, &trial);
                evals += 1;
                if ft > f {
                    st = trial;
                    f = ft;
                    eta = (eta * 1.5).min(1.0);
                    moved = true;
                    break;
                }
            }
            eta *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let point = if spec.positive { st.rho.iter().map(|&r| Complex64::new(r, 0.0)).collect() } else { st.point() };
    SearchOutcome { value: f, point, evaluations: evals }
}

fn default_starts(spec: &SearchSpec, norm: &NormEvaluator) -> Vec<Vec<Complex64>> {
    let n = spec.poly.n;
    let mut starts = spec.starts.clone();
    starts.push(vec![Complex64::new(1.0, 0.0); n]);
    for k in 0..n.min(16) {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = Complex64::new(1.0, 0.0);
        starts.push(e);
    }
    for k in [2usize, 3, 4] {
        if k < n {
            let w = norm.flat(k);
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v.iter_mut().take(k).for_each(|x| *x = Complex64::new(1.0 / w, 0.0));
            starts.push(v);
        }
    }
    starts
}

/// Runs `budget.restarts` independent ascents (at least the structured
/// starts) and returns the best one. Ties go to the lowest restart index, so
/// the result does not depend on the thread count.
pub(crate) fn ascend(spec: &SearchSpec, budget: &Budget) -> SearchOutcome {
    let norm = spec.lattice.evaluator();
    let n = spec.poly.n;
    let structured = default_starts(spec, &norm);
    let total = budget.restarts.max(structured.len());
    let outcomes: Vec<SearchOutcome> = (0..total)
        .into_par_iter()
        .map(|i| {
            let start = if i < structured.len() {
                structured[i].clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(budget.seed, i as u64));
                (0..n)
                    .map(|_| {
                        let u: f64 = rng.random();
                        let t: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                        Complex64::from_polar(u * u + 1e-3, t)
                    })
                    .collect()
            };
            climb(spec, &norm, &start, budget)
        })
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let mut best = outcomes.into_iter().reduce(|a, b| if b.value > a.value { b } else { a }).expect("at least one restart");
    best.evaluations = evaluations;
    best
}
