//! List and range syntax for sweeps: `1.5,2,3`, `2..16` (step 1),
//! `2..16x2` (step 2) and `inf`, in any comma-separated combination.

use crate::CliError;

/// Parses one exponent, accepting `inf`.
pub fn parse_exponent(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    t.parse::<f64>().map_err(|_| CliError::Argument(format!("not a number: {t:?}")))
}

/// Parses a list of reals with inclusive ranges.
pub fn parse_reals(spec: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, rest)) = part.split_once("..") {
            let (b, step) = match rest.split_once('x') {
                Some((b, s)) => (b, parse_exponent(s)?),
                None => (rest, 1.0),
            };
            let (a, b) = (parse_exponent(a)?, parse_exponent(b)?);
            if !(step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
                return Err(CliError::Argument(format!("bad range {part:?}")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            out.extend((0..=count).map(|i| a + step * i as f64));
        } else {
            out.push(parse_exponent(part)?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Argument(format!("empty list {spec:?}")));
    }
    Ok(out)
}

/// Parses a list of nonnegative integers with inclusive ranges.
pub fn parse_ints(spec: &str) -> Result<Vec<u64>, CliError> {
    parse_reals(spec)?
        .into_iter()
        .map(|v| {
            if v.is_finite() && v >= 0.0 && v.fract() == 0.0 {
                Ok(v as u64)
            } else {
                Err(CliError::Argument(format!("not a nonnegative integer: {v}")))
            }
        })
        .collect()
}
