//! Precision modes and the tolerance bundle threaded through every evaluation.

use crate::error::{AuditError, Result};

/// Arithmetic backend selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionMode {
    /// IEEE binary64.
    Binary64,
    /// Multi-precision binary arithmetic carrying at least `digits` decimal digits.
    Extended { digits: u32 },
}

/// Digits used when extended precision is engaged automatically.
pub const DEFAULT_EXTENDED_DIGITS: u32 = 50;

/// Largest exponent argument evaluated in binary64 before promotion kicks in.
pub const AUTO_EXTEND_ARGUMENT: f64 = 300.0;

/// Precision mode plus the tolerances used for convergence and comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionContext {
    pub mode: PrecisionMode,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Magnitude above which hyperbolic values are returned in scaled form.
    pub overflow_threshold: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::binary64()
    }
}

impl PrecisionContext {
    pub fn binary64() -> Self {
        PrecisionContext {
            mode: PrecisionMode::Binary64,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            overflow_threshold: 1e300,
        }
    }

    pub fn extended(digits: u32) -> Result<Self> {
        let ctx = PrecisionContext {
            mode: PrecisionMode::Extended { digits },
            ..Self::binary64()
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn with_mode(mut self, mode: PrecisionMode) -> Result<Self> {
        self.mode = mode;
        self.validate()?;
        Ok(self)
    }

    /// Extended context carrying at least `digits`, with the same tolerances.
    pub fn with_digits(self, digits: u32) -> Result<Self> {
        self.with_mode(PrecisionMode::Extended {
            digits: digits.max(self.digits()),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let PrecisionMode::Extended { digits } = self.mode {
            if !(20..=2000).contains(&digits) {
                return Err(AuditError::InvalidPrecision(format!(
                    "extended precision needs 20..=2000 digits, got {digits}"
                )));
            }
        }
        for (name, v) in [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("overflow_threshold", self.overflow_threshold),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(AuditError::InvalidPrecision(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Parses `f64` or `dec:<digits>`.
    pub fn parse_mode(text: &str) -> Result<PrecisionMode> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("f64") || text.eq_ignore_ascii_case("binary64") {
            return Ok(PrecisionMode::Binary64);
        }
        if let Some(d) = text.strip_prefix("dec:") {
            let digits: u32 = d.parse().map_err(|_| {
                AuditError::InvalidPrecision(format!("cannot parse digit count in '{text}'"))
            })?;
            let ctx = Self::binary64().with_mode(PrecisionMode::Extended { digits })?;
            return Ok(ctx.mode);
        }
        Err(AuditError::InvalidPrecision(format!(
            "expected 'f64' or 'dec:<digits>', got '{text}'"
        )))
    }

    pub fn is_extended(&self) -> bool {
        matches!(self.mode, PrecisionMode::Extended { .. })
    }

    /// Decimal digits carried by the arithmetic.
    pub fn digits(&self) -> u32 {
        match self.mode {
            PrecisionMode::Binary64 => 16,
            PrecisionMode::Extended { digits } => digits,
        }
    }

    /// Mantissa bits used for multi-precision values, including guard bits.
    pub fn bits(&self) -> u32 {
        match self.mode {
            PrecisionMode::Binary64 => 53,
            PrecisionMode::Extended { digits } => {
                (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 32
            }
        }
    }

    /// Returns an extended context when `largest_argument` would overflow binary64 exponentials.
    pub fn promoted_for(&self, largest_argument: f64) -> Self {
        if self.is_extended() || largest_argument.abs() <= AUTO_EXTEND_ARGUMENT {
            *self
        } else {
            PrecisionContext {
                mode: PrecisionMode::Extended {
                    digits: DEFAULT_EXTENDED_DIGITS,
                },
                ..*self
            }
        }
    }

    /// Short label used in reports: `f64` or `dec:<digits>`.
    pub fn label(&self) -> String {
        match self.mode {
            PrecisionMode::Binary64 => "f64".to_string(),
            PrecisionMode::Extended { digits } => format!("dec:{digits}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_modes() {
        assert_eq!(
            PrecisionContext::parse_mode("f64").unwrap(),
            PrecisionMode::Binary64
        );
        assert_eq!(
            PrecisionContext::parse_mode("dec:60").unwrap(),
            PrecisionMode::Extended { digits: 60 }
        );
        assert!(PrecisionContext::parse_mode("dec:x").is_err());
        assert!(PrecisionContext::parse_mode("dec:5").is_err());
        assert!(PrecisionContext::parse_mode("quad").is_err());
    }

    #[test]
    fn rejects_bad_tolerances() {
        let mut ctx = PrecisionContext::binary64();
        ctx.rel_tol = 0.0;
        assert!(ctx.validate().is_err());
        ctx.rel_tol = f64::NAN;
        assert!(ctx.validate().is_err());
    }

    #[test]
    fn promotion_threshold() {
        let ctx = PrecisionContext::binary64();
        assert!(!ctx.promoted_for(299.0).is_extended());
        assert!(ctx.promoted_for(301.0).is_extended());
        assert_eq!(ctx.promoted_for(1e4).digits(), DEFAULT_EXTENDED_DIGITS);
        assert!(PrecisionContext::extended(50).unwrap().bits() >= 166);
    }
}
