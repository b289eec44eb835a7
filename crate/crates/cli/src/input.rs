//! Parsing of rationals, grids and `key=value` config files.

use std::collections::BTreeMap;
use std::path::Path;

use kee_core::{Rat, Scalar};

use crate::CliError;

/// Parses `p/q` or an integer exactly. With `lossy`, decimal and
/// exponent forms are also accepted and converted through `f64`, so the
/// result is the nearest double, not the decimal as written.
pub fn parse_rational(s: &str, lossy: bool) -> Result<Rat, CliError> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rat>() {
        return Ok(r);
    }
    let bad = |why: &str| CliError::Input(format!("cannot parse {s:?} as a rational: {why}"));
    if s.contains('/') {
        return Err(bad("expected p/q with integers p and q, q nonzero"));
    }
    match s.parse::<f64>() {
        Ok(f) if lossy => Rat::from_float(f).ok_or_else(|| bad("not a finite number")),
        Ok(_) => Err(bad(
            "decimal input needs --lossy (converted through f64); write p/q for exact input",
        )),
        Err(_) => Err(bad("expected p/q")),
    }
}

/// `lo:hi:count` with `count` points spaced evenly from `lo` to `hi`
/// inclusive. A count of 1 gives `lo`; 0 gives no points.
pub fn parse_grid(s: &str, lossy: bool) -> Result<Vec<Rat>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(CliError::Input(format!("grid {s:?} must have the form lo:hi:count")));
    };
    let lo = parse_rational(lo, lossy)?;
    let hi = parse_rational(hi, lossy)?;
    let count: i64 = count
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("grid count {count:?} is not a nonnegative integer")))?;
    if count < 0 {
        return Err(CliError::Input(format!("grid count {count} is negative")));
    }
    Ok(match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo.clone() + (hi.clone() - lo.clone()) * Rat::from_frac(i, count - 1))
            .collect(),
    })
}

/// Reads `key = value` lines; `#` starts a comment, blank lines are
/// skipped, and keys use the long option names (`beta1`, `beta1-grid`, ...).
pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Input(format!("config line {}: expected key=value", k + 1)));
        };
        out.insert(key.trim().replace('_', "-"), value.trim().to_string());
    }
    Ok(out)
}

pub fn parse_bool(key: &str, s: &str) -> Result<bool, CliError> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Input(format!("{key} must be true or false, got {s:?}"))),
    }
}
