//! Real zeros of Ξ by sign-change bracketing and bisection, and zero tables
//! used as regression fixtures.

use std::path::Path;
use std::time::SystemTime;

use rayon::prelude::*;

use crate::error::{AuditError, Result};
use crate::numerics::roots::bisect;
use crate::numerics::{Complex, PrecisionContext, Real};
use crate::special::{big_xi, XiMethod};

/// A point `t = t1 + i t2` proposed as a zero of Ξ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroCandidate {
    /// Ordinate (real part of t).
    pub t1: f64,
    /// Displacement off the critical line (imaginary part of t).
    pub t2: f64,
}

impl ZeroCandidate {
    /// Checks that `t2` lies in the open strip `(-1/2, 1/2)`.
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !t1.is_finite() || !t2.is_finite() {
            return Err(AuditError::InvalidCandidate(format!(
                "non-finite candidate ({t1}, {t2})"
            )));
        }
        if t2.abs() >= 0.5 {
            return Err(AuditError::InvalidCandidate(format!(
                "t2 = {t2} lies outside (-1/2, 1/2)"
            )));
        }
        Ok(ZeroCandidate { t1, t2 })
    }

    /// Every zero of Ξ has |Re t| > 6; a candidate below that cannot be a zero.
    pub fn check_claimed_zero(&self) -> Result<()> {
        if self.t1.abs() <= 6.0 {
            return Err(AuditError::InvalidCandidate(format!(
                "|t1| = {} is not above 6, where no zeros of Xi lie",
                self.t1.abs()
            )));
        }
        Ok(())
    }
}

/// Ordered list of known zero ordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    pub ordinates: Vec<f64>,
    pub source: String,
    pub loaded_at: SystemTime,
}

impl ZeroTable {
    /// Parses one ordinate per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut ordinates: Vec<f64> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let value: f64 = trimmed.parse().map_err(|_| AuditError::Parse {
                line,
                message: format!("'{trimmed}' is not a decimal number"),
            })?;
            if !value.is_finite() || value <= 6.0 {
                return Err(AuditError::Parse {
                    line,
                    message: format!("ordinate {trimmed} must be finite and above 6"),
                });
            }
            if let Some(&last) = ordinates.last() {
                if value <= last {
                    return Err(AuditError::Order { line });
                }
            }
            ordinates.push(value);
        }
        Ok(ZeroTable {
            ordinates,
            source: source.to_string(),
            loaded_at: SystemTime::now(),
        })
    }

    /// Table entry closest to `t`.
    pub fn nearest(&self, t: f64) -> Option<f64> {
        self.ordinates
            .iter()
            .copied()
            .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()))
    }
}

/// Reads and validates a zero table from disk.
pub fn load_zero_table(path: &Path) -> Result<ZeroTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AuditError::Io(format!("{}: {e}", path.display())))?;
    ZeroTable::parse(&text, &path.display().to_string())
}

/// Ξ(t) for real `t`; the value is real up to rounding.
pub fn xi_real<R: Real>(t: &R, method: XiMethod, ctx: &PrecisionContext) -> Result<R> {
    Ok(big_xi(&Complex::from_real(t.clone()), method, ctx)?.re)
}

/// Bracket width at which bisection stops.
pub const REFINE_WIDTH: f64 = 1e-12;

/// Scans `[t_min, t_max]` with the given step and refines every sign change of Ξ.
///
/// Grid evaluation and bracket refinement run in parallel; results are in
/// increasing order.
pub fn scan_real_zeros(
    t_min: f64,
    t_max: f64,
    step: f64,
    method: XiMethod,
    ctx: &PrecisionContext,
) -> Result<Vec<ZeroCandidate>> {
    if !(t_min.is_finite() && t_max.is_finite() && 6.0 < t_min && t_min < t_max) {
        return Err(AuditError::InvalidInput(format!(
            "scan range must satisfy 6 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(AuditError::InvalidInput(format!("step must be positive, got {step}")));
    }
    let count = ((t_max - t_min) / step).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|k| t_min + k as f64 * step).collect();
    if *grid.last().expect("non-empty grid") < t_max {
        grid.push(t_max);
    }
    let values: Vec<f64> = grid
        .par_iter()
        .map(|t| xi_real(t, method, ctx))
        .collect::<Result<_>>()?;
    let mut brackets = Vec::new();
    for k in 0..grid.len() {
        if values[k] == 0.0 {
            brackets.push((grid[k], grid[k], 0.0));
        } else if k + 1 < grid.len() && values[k + 1] != 0.0 && values[k].signum() != values[k + 1].signum() {
            brackets.push((grid[k], grid[k + 1], values[k]));
        }
    }
    brackets
        .par_iter()
        .map(|&(lo, hi, f_lo)| {
            if lo == hi {
                return Ok(ZeroCandidate { t1: lo, t2: 0.0 });
            }
            let r = bisect(
                |t: &f64| xi_real(t, method, ctx),
                lo,
                hi,
                f_lo,
                |w, _, _| *w < REFINE_WIDTH,
                200,
            )?;
            Ok(ZeroCandidate { t1: r.root, t2: 0.0 })
        })
        .collect()
}
