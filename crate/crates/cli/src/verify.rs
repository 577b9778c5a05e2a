//! Verification suites. Each suite checks library output against an
//! independent oracle or a proven inequality and emits one row per check.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use bpl_core::characteristics::char_numeric;
use bpl_core::constants::{chi_mon_bracket, default_m_max, lambda_hat, reference_asymptotic, ReferenceCurve};
use bpl_core::lattice::conjugate;
use bpl_core::multiindex::{class_size, parity_split, reduce, reduce_jmode};
use bpl_core::tetra_average::{kappa_partials, moment_quadrature, KAPPA_PRIMES};
use bpl_core::{
    bohr_bracket, embedding_norm, lebesgue_constant, lorentz_bound_suite, moment, rw_projection_constant,
    tetra_projection_norm_check, Bracket, Budget, Complex64, IndexSetSpec, LatticeSpec, MultiIndex,
};

use crate::output::{num, Table};
use crate::CliError;

/// Suite names in execution order, paired with their criterion number.
pub const SUITES: [(&str, u32); 14] = [
    ("combinatorics", 1),
    ("parity", 2),
    ("characteristics", 3),
    ("lorentz-norms", 4),
    ("kappa", 5),
    ("moments", 6),
    ("tetra", 7),
    ("rw", 8),
    ("lebesgue", 9),
    ("lambda-hat", 10),
    ("chimon", 11),
    ("bohr-disc", 12),
    ("bohr-trend", 13),
    ("lorentz-suite", 14),
];

/// Column names of the verification table.
pub const HEADER: [&str; 7] = ["suite", "criterion", "check", "observed", "bound", "status", "detail"];

type Res<T> = Result<T, CliError>;

/// One verified statement.
struct Check {
    name: String,
    observed: String,
    bound: String,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, observed: impl Into<String>, bound: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), observed: observed.into(), bound: bound.into(), pass, detail: String::new() }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    /// Count of failing cases, required to be zero.
    fn zero(name: impl Into<String>, failures: usize, cases: usize) -> Self {
        Check::new(name, failures.to_string(), "0", failures == 0).detail(format!("cases={cases}"))
    }

    /// `observed ≤ bound`.
    fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Check::new(name, num(observed), num(bound), observed <= bound)
    }
}

/// Runs one suite or `all`, returning the table with failures filled in.
pub fn run(suite: &str, budget: &Budget) -> Res<Table> {
    let selected: Vec<(&str, u32)> = if suite == "all" {
        SUITES.to_vec()
    } else {
        let found = SUITES.iter().find(|(name, _)| *name == suite).copied();
        vec![found.ok_or_else(|| {
            let names: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
            CliError::Argument(format!("unknown suite {suite:?} (all, {})", names.join(", ")))
        })?]
    };
    let mut table = Table::new(&HEADER);
    let mut failed = 0;
    for (name, criterion) in selected {
        let checks = run_suite(name, budget)?;
        let suite_ok = checks.iter().all(|c| c.pass);
        for c in checks {
            if !c.pass {
                table.failures.push(format!("{name}: {} observed {} bound {}", c.name, c.observed, c.bound));
            }
            let status = if c.pass { "pass" } else { "fail" };
            table.push(vec![name.into(), criterion.to_string(), c.name, c.observed, c.bound, status.into(), c.detail]);
        }
        if !suite_ok {
            failed += 1;
        }
        table.note(format!("criterion_{criterion}"), if suite_ok { "pass" } else { "fail" });
    }
    table.note("failed_suites", failed.to_string());
    Ok(table)
}

fn run_suite(name: &str, budget: &Budget) -> Res<Vec<Check>> {
    match name {
        "combinatorics" => combinatorics(),
        "parity" => parity(),
        "characteristics" => characteristics(),
        "lorentz-norms" => lorentz_norms(budget.seed),
        "kappa" => Ok(kappa_suite()),
        "moments" => Ok(moments()),
        "tetra" => tetra(budget.seed),
        "rw" => Ok(rw()),
        "lebesgue" => Ok(lebesgue()),
        "lambda-hat" => lambda_hat_suite(budget),
        "chimon" => chimon(budget),
        "bohr-disc" => bohr_disc(budget),
        "bohr-trend" => bohr_trend(budget),
        "lorentz-suite" => lorentz_suite(budget),
        _ => unreachable!("suite names come from SUITES"),
    }
}

fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn to_u128(v: &BigUint) -> Option<u128> {
    u128::try_from(v).ok()
}

fn combinatorics() -> Res<Vec<Check>> {
    let (mut card_bad, mut tetra_bad, mut reduce_bad, mut cases) = (0, 0, 0, 0);
    for n in 1..=8usize {
        for m in 0..=8u32 {
            cases += 1;
            let full = IndexSetSpec::full(n, m);
            let want = binom_u128((n as u64) + m as u64 - 1, m as u64);
            if to_u128(&full.cardinality()) != Some(want) || full.enumerate()?.len() as u128 != want {
                card_bad += 1;
            }
            let tetra = IndexSetSpec::tetra(n, m);
            let want_t = binom_u128(n as u64, m as u64);
            if to_u128(&tetra.cardinality()) != Some(want_t) || tetra.enumerate()?.len() as u128 != want_t {
                tetra_bad += 1;
            }
            if m >= 1 {
                let lower = IndexSetSpec::full(n, m - 1).enumerate()?;
                let generic = IndexSetSpec::explicit(n, full.enumerate()?)?;
                let same = reduce(&full)?.enumerate()? == lower
                    && reduce(&generic)?.enumerate()? == lower
                    && reduce_jmode(&full)?.enumerate()? == lower;
                if !same {
                    reduce_bad += 1;
                }
            }
        }
    }
    // class sizes against tuple counts in [n]^m
    let (mut class_bad, mut class_cases) = (0, 0);
    for n in 1..=8usize {
        for m in 0..=6u32 {
            let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
            let mut tuple = vec![0usize; m as usize];
            loop {
                let mut alpha = vec![0u32; n];
                for &t in &tuple {
                    alpha[t] += 1;
                }
                *counts.entry(alpha).or_default() += 1;
                let mut pos = 0;
                while pos < tuple.len() {
                    tuple[pos] += 1;
                    if tuple[pos] < n {
                        break;
                    }
                    tuple[pos] = 0;
                    pos += 1;
                }
                if pos == tuple.len() {
                    break;
                }
            }
            let members = IndexSetSpec::full(n, m).enumerate()?;
            class_cases += members.len();
            if members.len() != counts.len() {
                class_bad += 1;
            }
            for a in &members {
                let brute = counts.get(a.exponents()).copied().unwrap_or(0);
                if to_u128(&class_size(a)) != Some(brute as u128) {
                    class_bad += 1;
                }
            }
        }
    }
    Ok(vec![
        Check::zero("full cardinality = C(n+m-1,m), m,n <= 8", card_bad, cases),
        Check::zero("tetra cardinality = C(n,m), m,n <= 8", tetra_bad, cases),
        Check::zero("class_size = tuple count, m <= 6, n <= 8", class_bad, class_cases),
        Check::zero("reduce(full m) = full(m-1), m,n <= 8", reduce_bad, cases),
    ])
}

fn parity() -> Res<Vec<Check>> {
    let (mut bad, mut cases) = (0, 0);
    let mut worst: f64 = 0.0;
    for n in 1..=6usize {
        for m in 0..=6u32 {
            for a in IndexSetSpec::full(n, m).enumerate()? {
                cases += 1;
                let (t, e) = parity_split(&a);
                let lhs = class_size(&a);
                let rhs = (BigUint::from(1u32) << m) * class_size(&t) * class_size(&e);
                if lhs > rhs {
                    bad += 1;
                }
                worst = worst.max(to_u128(&lhs).unwrap_or(u128::MAX) as f64 / to_u128(&rhs).unwrap_or(1) as f64);
            }
        }
    }
    Ok(vec![Check::zero("|[a]| <= 2^m |[a_T]| |[a_E]|, m,n <= 6", bad, cases)
        .detail(format!("cases={cases};max_ratio={}", num(worst)))])
}

/// `(m^m/α^α)^{1/r}` evaluated directly.
fn dineen(alpha: &MultiIndex, r: f64) -> f64 {
    if r.is_infinite() {
        return 1.0;
    }
    let xlogx = |v: f64| if v > 0.0 { v * v.ln() } else { 0.0 };
    let m = alpha.order() as f64;
    let ln = xlogx(m) - alpha.exponents().iter().map(|&a| xlogx(a as f64)).sum::<f64>();
    (ln / r).exp()
}

fn characteristics() -> Res<Vec<Check>> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &r in &[1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        for n in 1..=4usize {
            let x = LatticeSpec::lp(r, n);
            for m in 1..=5u32 {
                for a in IndexSetSpec::full(n, m).enumerate()? {
                    let b = char_numeric(&a, &x)?;
                    let want = dineen(&a, r);
                    cases += 1;
                    worst = worst.max((b.lo - want).abs() / want).max((b.hi - want).abs() / want);
                }
            }
        }
    }
    Ok(vec![Check::at_most("char_numeric vs (m^m/a^a)^(1/r) relative error", worst, 1e-6).detail(format!("cases={cases}"))])
}

const LORENTZ_PAIRS: [(f64, f64); 4] = [(2.0, 1.0), (3.0, 1.5), (1.5, 1.0), (4.0, 2.0)];

fn lorentz_norms(seed: u64) -> Res<Vec<Check>> {
    let mut rows = Vec::new();
    for (idx, &(p, q)) in LORENTZ_PAIRS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x4c4f_0000 + idx as u64));
        let pc = conjugate(p);
        let (mut bad, mut embed_bad) = (0, 0);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let n = rng.random_range(1..=64usize);
            let scale = 10f64.powf(rng.random::<f64>() * 4.0 - 2.0);
            let z: Vec<Complex64> = (0..n)
                .map(|_| {
                    let r = if rng.random::<f64>() < 0.2 { 0.0 } else { scale * rng.random::<f64>().powi(2) };
                    Complex64::from_polar(r, rng.random::<f64>() * 2.0 * PI)
                })
                .collect();
            let x = LatticeSpec::lorentz(p, q, n);
            let (norm, star) = (x.norm(&z)?, x.star_norm(&z)?);
            let slack = 1e-12 * (1.0 + norm);
            if norm > star + slack || star > pc * norm + slack {
                bad += 1;
            }
            if norm > 0.0 {
                worst = worst.max(star / norm);
            }
            if LatticeSpec::lp(p, n).norm(&z)? > norm + slack {
                embed_bad += 1;
            }
        }
        rows.push(Check::zero(format!("|z| <= |z|* <= p'|z| on lorentz({p},{q})"), bad, 10_000).detail(format!(
            "max_star_ratio={};p'={}",
            num(worst),
            num(pc)
        )));
        rows.push(Check::zero(format!("sampled |z|_p <= |z|_(p,q) on lorentz({p},{q})"), embed_bad, 10_000));
        let mut not_one = 0;
        for &n in &[1usize, 2, 8, 64] {
            let b = embedding_norm(&LatticeSpec::lorentz(p, q, n), &LatticeSpec::lp(p, n), seed)?;
            if b.lo != 1.0 || b.hi != 1.0 {
                not_one += 1;
            }
        }
        rows.push(Check::zero(format!("id: lorentz({p},{q}) -> lp({p}) bracket is [1,1], n in {{1,2,8,64}}"), not_one, 4));
    }
    Ok(rows)
}

fn sieve(limit: usize) -> Vec<usize> {
    let mut is = vec![true; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if is[i] {
            out.push(i);
            (i * i..=limit).step_by(i).for_each(|j| is[j] = false);
        }
    }
    out
}

fn kappa_suite() -> Vec<Check> {
    // the millionth prime is 15485863
    let primes: Vec<usize> = sieve(15_485_863);
    let primes = &primes[..KAPPA_PRIMES];
    let partials = kappa_partials(primes);
    let value = *partials.last().expect("nonempty");
    let monotone = partials.windows(2).filter(|w| w[1] <= w[0]).count();
    let direct = primes.iter().fold(1.0f64, |acc, &p| {
        let x = PI / p as f64;
        acc * x / x.sin()
    });
    let library = bpl_core::kappa(KAPPA_PRIMES);
    vec![
        Check::at_most("|kappa(10^6 primes) - 2.209|", (library - 2.209).abs(), 1e-3).detail(format!("kappa={}", num(library))),
        Check::zero("partial products strictly increasing", monotone, partials.len()),
        Check::at_most("library vs direct product, relative", (library - direct).abs() / direct, 1e-9)
            .detail(format!("direct={}", num(direct))),
        Check::at_most("partials vs library value, relative", (library - value).abs() / value, 1e-12),
    ]
}

fn moments() -> Vec<Check> {
    let mut worst: f64 = 0.0;
    for m in 1..=7u32 {
        worst = worst.max((moment(m, 1) - 1.0).norm());
        for k in 2..=m {
            worst = worst.max(moment(m, k).norm());
        }
    }
    let mut quad: f64 = 0.0;
    for m in 1..=5u32 {
        for k in 1..=m + 3 {
            quad = quad.max((moment(m, k) - moment_quadrature(m, k)).norm());
        }
    }
    vec![
        Check::at_most("max |moment(m,1)-1|, |moment(m,k)|, 2<=k<=m<=7", worst, 1e-10),
        Check::at_most("closed form vs quadrature, m <= 5, k <= m+3", quad, 1e-10),
    ]
}

fn tetra(seed: u64) -> Res<Vec<Check>> {
    let lattices = [("lp(inf)", f64::INFINITY, None), ("lp(2)", 2.0, None), ("lorentz(2,1)", 2.0, Some(1.0))];
    let mut rows = Vec::new();
    for (label, p, q) in lattices {
        let (mut bad, mut worst) = (0usize, 0.0f64);
        let mut kappa_pow = 0.0;
        for n in 1..=3usize {
            for m in 1..=3u32 {
                let x = match q {
                    Some(q) => LatticeSpec::lorentz(p, q, n),
                    None => LatticeSpec::lp(p, n),
                };
                let rep = tetra_projection_norm_check(&x, m, n, 100, seed)?;
                bad += rep.violations;
                bad += rep.witnesses.iter().filter(|w| w.projected_lo > rep.kappa_pow_m * w.original_hi + 1e-6).count();
                let rel = rep.max_ratio / rep.kappa_pow_m;
                if rel >= worst {
                    worst = rel;
                    kappa_pow = rep.kappa_pow_m;
                }
            }
        }
        rows.push(
            Check::zero(format!("|QP|.lo <= kappa^m |P|.hi + 1e-6 on {label}, n,m <= 3, 100 trials"), bad, 900).detail(format!(
                "max_ratio_over_kappa_pow={};kappa_pow_m={}",
                num(worst),
                num(kappa_pow)
            )),
        );
    }
    Ok(rows)
}

fn rw() -> Vec<Check> {
    let two = (1..=50u32).map(|m| rw_projection_constant(m, 2)).fold(0.0, f64::max);
    let mut ks = 0;
    let mut ks_worst: f64 = 0.0;
    for m in 1..=10u32 {
        for n in 1..=10usize {
            let bound = (binom_u128((n + m as usize - 1) as u64, m as u64) as f64).sqrt();
            let v = rw_projection_constant(m, n);
            ks_worst = ks_worst.max(v / bound);
            if v > bound {
                ks += 1;
            }
        }
    }
    // even m = 2k: k!/(2k)! * (n+k)(n+k+1)...(n+2k-1)
    let mut even: f64 = 0.0;
    for k in 1..=10u32 {
        for n in 1..=10usize {
            let mut v = 1.0f64;
            for i in 0..k {
                v *= (n as f64 + k as f64 + i as f64) / (k as f64 + 1.0 + i as f64);
            }
            let lib = rw_projection_constant(2 * k, n);
            even = even.max((lib - v).abs() / v);
        }
    }
    vec![
        Check::at_most("max rw(m,2), m <= 50", two, 2.0),
        Check::zero("rw(m,n) <= sqrt(C(n+m-1,m)), m,n <= 10", ks, 100).detail(format!("max_ratio={}", num(ks_worst))),
        Check::at_most("|rw(2,2) - 1.5|", (rw_projection_constant(2, 2) - 1.5).abs(), 1e-12),
        Check::at_most("even-degree product oracle, relative", even, 1e-10),
    ]
}

fn lebesgue() -> Vec<Check> {
    let degrees = [8u32, 32, 128, 512];
    let residuals: Vec<f64> = degrees.iter().map(|&m| lebesgue_constant(m) - 4.0 / (PI * PI) * ((m + 1) as f64).ln()).collect();
    let worst = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    let spread =
        residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - residuals.iter().cloned().fold(f64::INFINITY, f64::min);
    let m = 8u32;
    let k = 2_000_000;
    let h = 2.0 * PI / k as f64;
    let brute: f64 = (0..k)
        .map(|i| {
            let t = -PI + (i as f64 + 0.5) * h;
            (((m as f64 + 0.5) * t).sin() / (0.5 * t).sin()).abs()
        })
        .sum::<f64>()
        * h
        / (2.0 * PI);
    let detail = residuals.iter().zip(degrees).map(|(r, m)| format!("res({m})={}", num(*r))).collect::<Vec<_>>().join(";");
    vec![
        Check::at_most("max |L(m) - (4/pi^2) ln(m+1)|, m in {8,32,128,512}", worst, 1.5).detail(detail),
        Check::at_most("residual oscillation", spread, 0.1),
        Check::at_most("L(8) vs midpoint rule", (lebesgue_constant(8) - brute).abs(), 1e-8),
    ]
}

fn lambda_hat_suite(budget: &Budget) -> Res<Vec<Check>> {
    let mut rows = Vec::new();
    let mut invalid = 0;
    let mut cases = 0;

    let l1: Vec<(u32, usize)> = (1..=4u32).flat_map(|m| (1..=6usize).map(move |n| (m, n))).collect();
    let res: Vec<Res<Bracket>> =
        l1.par_iter().map(|&(m, n)| Ok(lambda_hat(&IndexSetSpec::full(n, m), &LatticeSpec::lp(1.0, n), budget)?)).collect();
    let (mut bad, mut worst) = (0, 0.0f64);
    for ((m, _), b) in l1.iter().zip(res) {
        let b = b?;
        cases += 1;
        invalid += usize::from(!b.is_valid());
        let bound = (*m as f64).exp();
        worst = worst.max(b.hi / bound);
        bad += usize::from(b.hi > bound);
    }
    rows.push(
        Check::zero("lambda_hat(full, l1).hi <= e^m, m <= 4, n <= 6", bad, l1.len())
            .detail(format!("max_hi_over_bound={}", num(worst))),
    );

    let lattices = [LatticeSpec::lp(2.0, 1), LatticeSpec::lorentz(2.0, 1.0, 1), LatticeSpec::lorentz(3.0, 1.0, 1)];
    for x0 in lattices {
        let grid: Vec<(u32, usize)> = (1..=3u32).flat_map(|m| (m as usize..=8).map(move |n| (m, n))).collect();
        let res: Vec<Res<(Bracket, f64)>> = grid
            .par_iter()
            .map(|&(m, n)| {
                let x = x0.with_dimension(n);
                let b = lambda_hat(&IndexSetSpec::tetra(n, m), &x, budget)?;
                let dual = |k: usize| -> Res<f64> {
                    x.dual_fundamental_function(k)?
                        .ok_or_else(|| CliError::Argument("dual fundamental function needs a norm".into()))
                };
                let bound = (m as f64).exp() * (dual(n)? / dual(m as usize)?).powi(m as i32);
                Ok((b, bound))
            })
            .collect();
        let (mut bad, mut worst) = (0, 0.0f64);
        for r in res {
            let (b, bound) = r?;
            cases += 1;
            invalid += usize::from(!b.is_valid());
            worst = worst.max(b.hi / bound);
            bad += usize::from(b.hi > bound);
        }
        rows.push(
            Check::zero(
                format!("lambda_hat(tetra, {}).hi <= e^m (phi'(n)/phi'(m))^m, m <= 3, n <= 8", x0.label()),
                bad,
                grid.len(),
            )
            .detail(format!("max_hi_over_bound={}", num(worst))),
        );
    }

    let ms: Vec<u32> = (1..=10).collect();
    let res: Vec<Res<Bracket>> =
        ms.par_iter().map(|&m| Ok(lambda_hat(&IndexSetSpec::full(2, m), &LatticeSpec::lp(2.0, 2), budget)?)).collect();
    let (mut bad, mut worst) = (0, f64::NEG_INFINITY);
    for (m, b) in ms.iter().zip(res) {
        let b = b?;
        cases += 1;
        invalid += usize::from(!b.is_valid());
        let rw = rw_projection_constant(*m, 2);
        worst = worst.max(rw - b.hi);
        bad += usize::from(rw > b.hi + 1e-6);
    }
    rows.push(
        Check::zero("rw(m,2) <= lambda_hat(full(m,2), l2).hi + 1e-6, m <= 10", bad, ms.len())
            .detail(format!("max_rw_minus_hi={}", num(worst))),
    );
    rows.push(Check::zero("brackets valid (lo <= hi, finite)", invalid, cases));
    Ok(rows)
}

/// Sup norms of `c_0 z_1^2 + c_1 z_1 z_2 + c_2 z_2^2` on `ℓ_p^2`, from a
/// sphere grid refined by compass search.
struct QuadraticOracle {
    p: f64,
    fine: SphereGrid,
    coarse: SphereGrid,
}

/// Sphere points `(t_i, φ_j)` as `(z_1, z_2)`, row-major in `t`.
struct SphereGrid {
    nt: usize,
    nphi: usize,
    points: Vec<(f64, Complex64)>,
}

impl QuadraticOracle {
    fn new(p: f64) -> Self {
        let grid = |nt: usize, nphi: usize| {
            let mut points = Vec::with_capacity((nt + 1) * nphi);
            for i in 0..=nt {
                for j in 0..nphi {
                    points.push(point(p, i as f64 / nt as f64, j as f64 * 2.0 * PI / nphi as f64));
                }
            }
            SphereGrid { nt, nphi, points }
        };
        QuadraticOracle { p, fine: grid(32, 48), coarse: grid(16, 24) }
    }

    fn eval(&self, c: &[Complex64; 3], t: f64, phi: f64) -> f64 {
        let (a, z2) = point(self.p, t.clamp(0.0, 1.0), phi);
        quadratic(c, a, z2)
    }

    /// Sup norm over the unit ball. By homogeneity the phase of `z_1` is
    /// fixed and the sphere is parametrized by `t ∈ [0,1]` and `φ`.
    fn sup(&self, c: &[Complex64; 3], fine: bool) -> f64 {
        let (grid, halvings) = if fine { (&self.fine, 18) } else { (&self.coarse, 12) };
        let (mut v, mut at) = (0.0, 0);
        for (k, &(a, z2)) in grid.points.iter().enumerate() {
            let w = quadratic(c, a, z2);
            if w > v {
                (v, at) = (w, k);
            }
        }
        let (mut t, mut phi) = ((at / grid.nphi) as f64 / grid.nt as f64, (at % grid.nphi) as f64 * 2.0 * PI / grid.nphi as f64);
        let (mut dt, mut dphi) = (1.0 / grid.nt as f64, 2.0 * PI / grid.nphi as f64);
        for _ in 0..halvings {
            let mut moved = true;
            while moved {
                moved = false;
                for (st, sp) in [(dt, 0.0), (-dt, 0.0), (0.0, dphi), (0.0, -dphi)] {
                    let (t2, p2) = ((t + st).clamp(0.0, 1.0), phi + sp);
                    let w = self.eval(c, t2, p2);
                    if w > v {
                        (v, t, phi) = (w, t2, p2);
                        moved = true;
                    }
                }
            }
            dt *= 0.5;
            dphi *= 0.5;
        }
        v
    }
}

/// Point of the positive sphere of `ℓ_p^2` with `z_2` rotated by `φ`.
fn point(p: f64, t: f64, phi: f64) -> (f64, Complex64) {
    let (a, b) = (t, 1.0 - t);
    let s = if p.is_infinite() { a.max(b) } else { (a.powf(p) + b.powf(p)).powf(1.0 / p) };
    (a / s, Complex64::from_polar(b / s, phi))
}

fn quadratic(c: &[Complex64; 3], a: f64, z2: Complex64) -> f64 {
    (c[0] * (a * a) + c[1] * a * z2 + c[2] * z2 * z2).norm()
}

fn coefficients(mask: [bool; 3], moduli: [f64; 3], psi: f64) -> [Complex64; 3] {
    let mut c = [Complex64::new(0.0, 0.0); 3];
    let mut first = true;
    for k in 0..3 {
        if mask[k] {
            // one relative phase is all that survives the torus action
            let phase = if first { 0.0 } else { psi };
            c[k] = Complex64::from_polar(moduli[k], phase);
            first = false;
        }
    }
    c
}

/// Brute-force `χ_mon` for `J ⊆ Λ(2,2)` on `ℓ_p^2`: the supremum over
/// moduli of `max_ψ ‖P‖ / min_ψ ‖P‖`, from a dense grid and seeded local
/// restarts.
fn chi_oracle(p: f64, mask: [bool; 3], seed: u64) -> f64 {
    let oracle = QuadraticOracle::new(p);
    let fine = |c: &[Complex64; 3]| oracle.sup(c, true);
    let coarse = |c: &[Complex64; 3]| oracle.sup(c, false);
    let phases: Vec<f64> = (0..24).map(|j| j as f64 * 2.0 * PI / 24.0).collect();
    let mut moduli_grid = Vec::new();
    for a in 0..=10 {
        for b in 0..=10 {
            for c in 0..=10 {
                let m = [a as f64 / 10.0, b as f64 / 10.0, c as f64 / 10.0];
                let active = (0..3).filter(|&k| mask[k] && m[k] > 0.0).count();
                let idle = (0..3).any(|k| !mask[k] && m[k] > 0.0);
                if active >= 1 && !idle {
                    moduli_grid.push(m);
                }
            }
        }
    }
    let grid_best = moduli_grid
        .par_iter()
        .map(|&m| {
            let s: Vec<f64> = phases.iter().map(|&psi| fine(&coefficients(mask, m, psi))).collect();
            let hi = s.iter().cloned().fold(0.0, f64::max);
            let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
            if lo > 0.0 {
                hi / lo
            } else {
                1.0
            }
        })
        .reduce(|| 1.0, f64::max);
    let restart_best = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x6368_0000_0000 + i));
            let mut v = [0.0f64; 5];
            for (k, slot) in v.iter_mut().enumerate() {
                *slot = if k < 3 { rng.random::<f64>() } else { rng.random::<f64>() * 2.0 * PI };
            }
            let ratio = |v: &[f64; 5], sup: &dyn Fn(&[Complex64; 3]) -> f64| {
                let m = [v[0].abs(), v[1].abs(), v[2].abs()];
                let den = sup(&coefficients(mask, m, v[4]));
                if den <= 1e-12 {
                    0.0
                } else {
                    sup(&coefficients(mask, m, v[3])) / den
                }
            };
            let mut best = ratio(&v, &coarse);
            let mut step = [0.1, 0.1, 0.1, 0.3, 0.3];
            for _ in 0..10 {
                let mut moved = false;
                for k in 0..5 {
                    for sign in [1.0, -1.0] {
                        let mut w = v;
                        w[k] += sign * step[k];
                        let r = ratio(&w, &coarse);
                        if r > best {
                            (best, v, moved) = (r, w, true);
                        }
                    }
                }
                if !moved {
                    step.iter_mut().for_each(|s| *s *= 0.5);
                }
            }
            ratio(&v, &fine)
        })
        .reduce(|| 1.0, f64::max);
    grid_best.max(restart_best)
}

fn chimon(budget: &Budget) -> Res<Vec<Check>> {
    let members = IndexSetSpec::full(2, 2).enumerate()?;
    let masks: [[bool; 3]; 4] = [[true, true, true], [true, true, false], [true, false, true], [false, true, true]];
    // enumerate() lists members in a fixed order; map mask slots to (2,0), (1,1), (0,2)
    let slot_of = |a: &MultiIndex| 2 - a.exponents()[0] as usize;
    let mut rows = Vec::new();
    let ps = [1.0, 2.0, f64::INFINITY];
    for mask in masks {
        let set: Vec<MultiIndex> = members.iter().filter(|a| mask[slot_of(a)]).cloned().collect();
        let j = IndexSetSpec::explicit(2, set.clone())?;
        let label = set.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ");
        let mut brackets = Vec::new();
        for (i, &p) in ps.iter().enumerate() {
            let x = LatticeSpec::lp(p, 2);
            let b = chi_mon_bracket(&j, &x, budget)?;
            let o = chi_oracle(p, mask, budget.seed.wrapping_add(i as u64));
            rows.push(Check::at_most(format!("width of chi_mon({label}) on {}", x.label()), b.width(), 0.05).detail(format!(
                "lo={};hi={}",
                num(b.lo),
                num(b.hi)
            )));
            rows.push(
                Check::new(
                    format!("oracle within bracket +- 0.01 for {label} on {}", x.label()),
                    num(o),
                    format!("[{}, {}]", num(b.lo - 0.01), num(b.hi + 0.01)),
                    b.contains(o, 0.01),
                )
                .detail(b.method.clone()),
            );
            brackets.push(b);
        }
        let ordered = brackets[0].lo <= brackets[1].hi && brackets[1].lo <= brackets[2].hi && brackets[0].lo <= brackets[2].hi;
        rows.push(Check::new(
            format!("lattice ordering l1 <= l2 <= linf for {label}"),
            format!("{};{};{}", num(brackets[0].lo), num(brackets[1].lo), num(brackets[2].lo)),
            format!("{};{};{}", num(brackets[0].hi), num(brackets[1].hi), num(brackets[2].hi)),
            ordered,
        ));
    }
    Ok(rows)
}

fn bohr_disc(budget: &Budget) -> Res<Vec<Check>> {
    let j = IndexSetSpec::full_up_to(1, 64);
    let b = bohr_bracket(&j, &LatticeSpec::lp(f64::INFINITY, 1), default_m_max(1), budget)?;
    Ok(vec![
        Check::new("bohr hi >= 1/3 - 0.01, disc, degree <= 64", num(b.hi), num(1.0 / 3.0 - 0.01), b.hi >= 1.0 / 3.0 - 0.01)
            .detail(b.method.clone()),
        Check::at_most("bohr hi <= 0.37 via Mobius family", b.hi, 0.37),
        Check::new("bracket valid", format!("[{}, {}]", num(b.lo), num(b.hi)), "lo <= hi", b.is_valid()),
    ])
}

fn bohr_trend(budget: &Budget) -> Res<Vec<Check>> {
    let mut rows = Vec::new();
    for n in [2usize, 4, 8, 16] {
        let m_max = default_m_max(n);
        let b = bohr_bracket(&IndexSetSpec::full_up_to(n, m_max), &LatticeSpec::lp(f64::INFINITY, n), m_max, budget)?;
        let reference = reference_asymptotic(&ReferenceCurve::SqrtLognOverN, n as f64);
        let (lo, hi) = (b.lo / reference, b.hi / reference);
        let ok = b.is_valid() && (0.25..=4.0).contains(&lo) && (0.25..=4.0).contains(&hi);
        rows.push(
            Check::new(
                format!("bohr/sqrt(ln n/n) in [0.25, 4] at both ends, n={n}"),
                format!("{};{}", num(lo), num(hi)),
                "[0.25, 4]",
                ok,
            )
            .detail(format!("lo={};hi={};m_max={m_max}", num(b.lo), num(b.hi))),
        );
    }
    Ok(rows)
}

fn lorentz_suite(budget: &Budget) -> Res<Vec<Check>> {
    let mut grid = Vec::new();
    for r in [1.5, 2.0, 3.0] {
        for s in [1.0, r, 4.0] {
            for m in 1..=3u32 {
                for n in [4usize, 8, 16] {
                    grid.push((r, s, m, n));
                }
            }
        }
    }
    let reports: Vec<Res<_>> = grid.par_iter().map(|&(r, s, m, n)| Ok(lorentz_bound_suite(m, n, r, s, budget)?)).collect();
    let mut values: HashMap<(u64, u64, u32, String), Vec<f64>> = HashMap::new();
    let (mut bad_c, mut violations, mut samples, mut slice_bad) = (0, 0, 0, 0);
    let mut keys = Vec::new();
    for rep in reports {
        let rep = rep?;
        for inst in &rep.instances {
            if !(inst.c_implied.is_finite() && inst.c_implied > 0.0) {
                bad_c += 1;
            }
            let key = (rep.r.to_bits(), rep.s.to_bits(), rep.m, inst.label.clone());
            if !values.contains_key(&key) {
                keys.push(key.clone());
            }
            values.entry(key).or_default().push(inst.c_implied);
        }
        violations += rep.violations();
        samples += rep.checks.iter().map(|c| c.samples).sum::<usize>();
        let slice_hi: f64 = rep.instances.iter().filter(|i| i.label.starts_with("support_level_")).map(|i| i.bracket.hi).sum();
        let full = rep.instance("full").map_or(f64::INFINITY, |i| i.bracket.lo);
        if full > slice_hi * (1.0 + 1e-9) {
            slice_bad += 1;
        }
    }
    let mut worst = (1.0f64, String::new());
    let mut spread_bad = 0;
    for key in &keys {
        let v = &values[key];
        let spread = v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(spread <= 8.0) {
            spread_bad += 1;
        }
        if spread > worst.0 || worst.1.is_empty() {
            worst = (spread, format!("r={};s={};m={};{}", f64::from_bits(key.0), f64::from_bits(key.1), key.2, key.3));
        }
    }
    Ok(vec![
        Check::zero("C_implied finite and positive", bad_c, values.values().map(Vec::len).sum()),
        Check::zero("C_implied spread across n in {4,8,16} <= 8", spread_bad, keys.len()).detail(format!(
            "max_spread={};at {}",
            num(worst.0),
            worst.1
        )),
        Check::zero("pointwise tetra/even/splitting estimates", violations, samples),
        Check::zero("lambda_hat(full).lo <= sum of slice hi", slice_bad, grid.len()),
    ])
}
