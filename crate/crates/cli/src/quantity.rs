//! Parsing of frequencies and `lo:hi:points` sweeps.
//!
//! Frequencies are read in units of `ω_e` unless they carry the `rad/s`
//! suffix, so `0.3`, `0.3we` and `9e8rad/s` all mean the same drive at
//! `ω_e = 3×10⁹ rad/s`.

use std::fmt;

use crate::error::{CliError, Result};

fn number(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("{what}: cannot parse `{s}` as a number")))?;
    if !v.is_finite() {
        return Err(CliError::Validation(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

/// Parses a frequency relative to `omega_e` (default) or absolute with `rad/s`.
pub fn parse_frequency(s: &str, omega_e: f64, what: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(abs) = s.strip_suffix("rad/s") {
        number(abs, what)
    } else if let Some(rel) = s.strip_suffix("we") {
        Ok(number(rel, what)? * omega_e)
    } else {
        Ok(number(s, what)? * omega_e)
    }
}

/// Parses an absolute quantity (no unit suffix allowed except `rad/s` for frequencies).
pub fn parse_absolute(s: &str, what: &str) -> Result<f64> {
    number(s.trim().trim_end_matches("rad/s"), what)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisName {
    Delta,
    X0,
    Energy,
}

impl AxisName {
    pub fn column(self) -> &'static str {
        match self {
            AxisName::Delta => "Delta",
            AxisName::X0 => "x0",
            AxisName::Energy => "E",
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub name: AxisName,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        giant_atom::lineshape::linspace(self.lo, self.hi, self.points)
    }

    pub fn describe(&self) -> String {
        format!("{:e}:{:e}:{}", self.lo, self.hi, self.points)
    }
}

/// A sweep flag is either a fixed value or an axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Range {
    Fixed(f64),
    Axis(AxisSpec),
}

impl Range {
    /// Applies `f` to a fixed value and leaves axes untouched.
    pub fn map_fixed(self, f: impl Fn(f64) -> f64) -> Range {
        match self {
            Range::Fixed(v) => Range::Fixed(f(v)),
            axis => axis,
        }
    }
}

/// Parses `value` or `lo:hi:points`, converting the endpoints with `convert`.
pub fn parse_range(
    s: &str,
    name: AxisName,
    convert: impl Fn(&str) -> Result<f64>,
) -> Result<Range> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [value] => Ok(Range::Fixed(convert(value)?)),
        [lo, hi, points] => {
            let lo = convert(lo)?;
            let hi = convert(hi)?;
            let points: usize = points.trim().parse().map_err(|_| {
                CliError::Validation(format!("{name}: point count `{points}` is not an integer"))
            })?;
            if points < 2 {
                return Err(CliError::Validation(format!(
                    "{name}: need at least 2 points, got {points}"
                )));
            }
            if lo >= hi {
                return Err(CliError::Validation(format!(
                    "{name}: lower bound {lo:e} must be below upper bound {hi:e}"
                )));
            }
            Ok(Range::Axis(AxisSpec {
                name,
                lo,
                hi,
                points,
            }))
        }
        _ => Err(CliError::Validation(format!(
            "{name}: expected `value` or `lo:hi:points`, got `{s}`"
        ))),
    }
}
