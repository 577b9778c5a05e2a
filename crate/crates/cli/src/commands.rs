//! Handlers for the single-instance commands and the grid sweep.

use std::time::Instant;

use rayon::prelude::*;

use bpl_core::constants::{
    bohr_report, chi_mon_report, default_m_max, k_m_report, kadets_snobar, lambda_hat_report, reference_asymptotic,
    ReferenceCurve, CSV_HEADER,
};
use bpl_core::multiindex::class_size;
use bpl_core::{characteristic, kappa, lebesgue_constant, lorentz_bound_suite, rw_projection_constant, CharResult};
use bpl_core::{Budget, ConstantReport, Family, Generator, IndexSetSpec, LatticeSpec, MultiIndex};

use crate::args::{Cli, Command, ConstantsArgs, IndexArgs, LatticeArgs, SweepArgs};
use crate::grid::{parse_exponent, parse_ints, parse_reals};
use crate::output::{num, Table};
use crate::verify;
use crate::CliError;

/// Runs the selected command and returns its table.
pub fn dispatch(cli: &Cli, budget: &Budget) -> Result<Table, CliError> {
    let timings = cli.global.timings;
    match &cli.command {
        Command::Idxset(index) => idxset(index),
        Command::Char { alpha, lattice } => char_command(alpha, lattice),
        Command::LambdaHat { index, lattice } => {
            let (j, x) = (index_set(index)?, lattice_spec(lattice, index.n)?);
            reports(vec![timed(timings, || lambda_hat_report(&j, &x, budget))?], budget.seed)
        }
        Command::Chimon { index, lattice } => {
            let (j, x) = (index_set(index)?, lattice_spec(lattice, index.n)?);
            reports(vec![timed(timings, || chi_mon_report(&j, &x, budget))?], budget.seed)
        }
        Command::Bohr { index, lattice, m_max } => {
            let (j, x) = (index_set(index)?, lattice_spec(lattice, index.n)?);
            let m_max = m_max.unwrap_or_else(|| default_m_max(index.n));
            reports(vec![timed(timings, || bohr_report(&j, &x, m_max, budget))?], budget.seed)
        }
        Command::Constants(args) => constants(args),
        Command::LorentzSuite { m, n, r, s } => lorentz(*m, *n, *r, parse_exponent(s)?, budget),
        Command::Verify { suite } => verify::run(suite, budget),
        Command::Sweep(args) => sweep(args, budget, timings),
    }
}

/// Builds a lattice of dimension `n` from the command-line flags.
pub fn lattice_spec(args: &LatticeArgs, n: usize) -> Result<LatticeSpec, CliError> {
    let p = parse_exponent(&args.p)?;
    let q = args.q.as_deref().map(parse_exponent).transpose()?;
    lattice_from(&args.family, p, q, n)
}

fn lattice_from(family: &str, p: f64, q: Option<f64>, n: usize) -> Result<LatticeSpec, CliError> {
    let family = match family {
        "lp" => {
            if q.is_some() {
                return Err(CliError::Argument("--q applies to the lorentz family only".into()));
            }
            Family::Lp { p }
        }
        "lorentz" => Family::Lorentz { p, q: q.ok_or_else(|| CliError::Argument("lorentz family needs --q".into()))? },
        other => return Err(CliError::Argument(format!("unknown family {other:?} (expected lp or lorentz)"))),
    };
    Ok(LatticeSpec::new(family, n)?)
}

/// Builds an index set from a generator name.
pub fn index_from(generator: &str, n: usize, m: u32, l: Option<u32>) -> Result<IndexSetSpec, CliError> {
    let generator = match generator {
        "full" => Generator::Full(m),
        "full_up_to" => Generator::FullUpTo(m),
        "tetra" => Generator::Tetra(m),
        "tetra_up_to" => Generator::TetraUpTo(m),
        "even" => Generator::Even(m),
        "support_level" => {
            Generator::SupportLevel { m, l: l.ok_or_else(|| CliError::Argument("support_level needs --l".into()))? }
        }
        other => return Err(CliError::Argument(format!("unknown generator {other:?}"))),
    };
    Ok(IndexSetSpec::new(n, generator)?)
}

fn index_set(args: &IndexArgs) -> Result<IndexSetSpec, CliError> {
    index_from(&args.generator, args.n, args.m, args.l)
}

fn timed(on: bool, f: impl FnOnce() -> bpl_core::Result<ConstantReport>) -> Result<(ConstantReport, u64), CliError> {
    let start = Instant::now();
    let report = f()?;
    let ms = if on { start.elapsed().as_millis() as u64 } else { 0 };
    Ok((report, ms))
}

fn reports(list: Vec<(ConstantReport, u64)>, seed: u64) -> Result<Table, CliError> {
    let mut table = Table::new(&CSV_HEADER);
    for (report, ms) in list {
        if !report.is_consistent() {
            table.failures.push(format!(
                "inconsistent bracket for {} on {}: [{}, {}]",
                report.quantity.as_str(),
                report.index_set.label(),
                report.bracket.lo,
                report.bracket.hi
            ));
        }
        if report.truncated {
            table.note(format!("truncated_{}", table.rows.len()), "true");
        }
        table.push(report.csv_row(seed, ms));
    }
    Ok(table)
}

fn idxset(args: &IndexArgs) -> Result<Table, CliError> {
    let j = index_set(args)?;
    let members = j.enumerate()?;
    let mut table = Table::new(&["alpha", "order", "support_size", "class_size"]);
    table.note("index_set", j.label());
    table.note("cardinality", j.cardinality().to_string());
    for a in &members {
        table.push(vec![a.to_string(), a.order().to_string(), a.support_size().to_string(), class_size(a).to_string()]);
    }
    Ok(table)
}

fn char_command(alpha: &[u32], lattice: &LatticeArgs) -> Result<Table, CliError> {
    let alpha = MultiIndex::new(alpha.to_vec());
    let x = lattice_spec(lattice, alpha.dimension())?;
    let res = characteristic(&alpha, &x)?;
    let mut header: Vec<&str> = CharResult::CSV_HEADER.to_vec();
    header.push("exact");
    let mut table = Table::new(&header);
    let mut row = res.csv_row();
    row.push(res.exact.map_or_else(String::new, num));
    if !res.bracket.is_valid() {
        table.failures.push(format!("invalid characteristic bracket [{}, {}]", res.bracket.lo, res.bracket.hi));
    }
    table.push(row);
    Ok(table)
}

fn constants(args: &ConstantsArgs) -> Result<Table, CliError> {
    let mut table = Table::new(&["constant", "arguments", "value"]);
    if args.kappa {
        if args.primes == 0 {
            return Err(CliError::Argument("--primes must be positive".into()));
        }
        table.push(vec!["kappa".into(), format!("primes={}", args.primes), num(kappa(args.primes))]);
    }
    if let Some(rw) = &args.rw {
        let &[m, n] = rw.as_slice() else {
            return Err(CliError::Argument("--rw takes two values m,n".into()));
        };
        if n == 0 || m > u32::MAX as usize {
            return Err(CliError::Argument("--rw needs m >= 0 and n >= 1".into()));
        }
        table.push(vec!["rw_projection".into(), format!("m={m};n={n}"), num(rw_projection_constant(m as u32, n))]);
    }
    if let Some(m) = args.lebesgue {
        table.push(vec!["lebesgue".into(), format!("m={m}"), num(lebesgue_constant(m))]);
    }
    if let Some(d) = args.kadets {
        if !(d >= 1.0 && d.is_finite()) {
            return Err(CliError::Argument("--kadets needs a dimension >= 1".into()));
        }
        table.push(vec!["kadets_snobar".into(), format!("dim={d}"), num(kadets_snobar(d))]);
    }
    if let Some(name) = &args.reference {
        let curve = ReferenceCurve::from_name(name, args.r, args.s, args.curve_m)?;
        let at = args.at.ok_or_else(|| CliError::Argument("--reference needs --at".into()))?;
        if !(at > 1.0 && at.is_finite()) {
            return Err(CliError::Argument("--at must exceed 1".into()));
        }
        table.push(vec![curve.name().into(), format!("n={at}"), num(reference_asymptotic(&curve, at))]);
    }
    if table.rows.is_empty() {
        return Err(CliError::Argument("constants needs one of --kappa, --rw, --lebesgue, --kadets, --reference".into()));
    }
    Ok(table)
}

fn lorentz(m: u32, n: usize, r: f64, s: f64, budget: &Budget) -> Result<Table, CliError> {
    let report = lorentz_bound_suite(m, n, r, s, budget)?;
    let mut table = Table::new(&["kind", "label", "lo", "hi", "rhs", "c_implied", "samples", "violations", "max_ratio"]);
    table.note("slice_sum_lo", num(report.slice_sum_lo));
    for inst in &report.instances {
        table.push(vec![
            "lambda_hat".into(),
            inst.label.clone(),
            num(inst.bracket.lo),
            num(inst.bracket.hi),
            num(inst.rhs),
            num(inst.c_implied),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }
    for c in &report.checks {
        if c.violations > 0 {
            table.failures.push(format!("{}: {} of {} samples violate", c.name, c.violations, c.samples));
        }
        table.push(vec![
            "pointwise".into(),
            c.name.clone(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            c.samples.to_string(),
            c.violations.to_string(),
            num(c.max_ratio),
        ]);
    }
    Ok(table)
}

/// One grid point of a sweep.
struct Instance {
    p: f64,
    q: Option<f64>,
    n: usize,
    m: u32,
}

fn sweep(args: &SweepArgs, budget: &Budget, timings: bool) -> Result<Table, CliError> {
    let quantity = args.quantity.as_str();
    if !matches!(quantity, "lambda-hat" | "chimon" | "km" | "bohr") {
        return Err(CliError::Argument(format!("unknown sweep quantity {quantity:?} (lambda-hat, chimon, km, bohr)")));
    }
    let ps = parse_reals(&args.p)?;
    let qs: Vec<Option<f64>> = match &args.q {
        Some(q) => parse_reals(q)?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let ns = parse_ints(&args.n)?;
    let ms = parse_ints(&args.m)?;
    let mut grid = Vec::new();
    for &p in &ps {
        for &q in &qs {
            for &n in &ns {
                for &m in &ms {
                    if n == 0 || m > u32::MAX as u64 {
                        return Err(CliError::Argument(format!("grid point n={n}, m={m} out of range")));
                    }
                    grid.push(Instance { p, q, n: n as usize, m: m as u32 });
                }
            }
        }
    }
    let results: Vec<Result<(ConstantReport, u64), CliError>> = grid
        .par_iter()
        .map(|inst| {
            let x = lattice_from(&args.family, inst.p, inst.q, inst.n)?;
            let j = index_from(&args.generator, inst.n, inst.m, args.l)?;
            timed(timings, || match quantity {
                "lambda-hat" => lambda_hat_report(&j, &x, budget),
                "chimon" => chi_mon_report(&j, &x, budget),
                "km" => k_m_report(&j, &x, budget),
                _ => bohr_report(&j, &x, args.m_max.unwrap_or_else(|| default_m_max(inst.n)), budget),
            })
        })
        .collect();
    reports(results.into_iter().collect::<Result<_, _>>()?, budget.seed)
}
