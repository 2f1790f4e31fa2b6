//! Flat `key = value` scenario files with `#` comments.

use std::collections::BTreeSet;

use crate::error::{CliError, CliResult};

/// Every key a scenario file may set. Rates are in units of the reference
/// rate (λ-units when `lambda = 1`, the default), times in its inverse.
pub const KEYS: &[&str] = &[
    "name", "lambda", "R", "delta", "delta1", "delta2", "r1", "s", "phi", "c01_re", "c01_im", "c02_re",
    "c02_im", "t_max", "points", "dt", "solvers", "guard",
];

/// Parses a scenario file into `(key, value)` pairs in file order.
/// Unknown and repeated keys are rejected.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::invalid("config", format!("line {}: expected `key = value`", n + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::invalid(key, format!("line {}: unknown key", n + 1)));
        }
        if value.is_empty() {
            return Err(CliError::invalid(key, format!("line {}: missing value", n + 1)));
        }
        if !seen.insert(key.to_string()) {
            return Err(CliError::invalid(key, format!("line {}: key given twice", n + 1)));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

pub(crate) fn parse_f64(field: &str, value: &str) -> CliResult<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::invalid(field, format!("`{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::invalid(field, format!("`{value}` is not finite")));
    }
    Ok(v)
}

pub(crate) fn parse_usize(field: &str, value: &str) -> CliResult<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::invalid(field, format!("`{value}` is not a non-negative integer")))
}
