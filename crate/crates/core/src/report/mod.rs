//! Machine-readable audit reports: canonical JSON, CSV roll-ups and SVG plots.

pub mod svg;

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value as Json};

use crate::error::{AuditError, Result};
use crate::numerics::Real;
use crate::signs::search::{EpsBound, SearchTrace};

/// Significant digits used for every float in a report.
pub const SIGNIFICANT_DIGITS: usize = 17;

/// A report field: a binary64 number, or a decimal string when the value does
/// not fit binary64 or is not numeric.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    /// Binary64 when representable without overflow or underflow to zero.
    pub fn real<R: Real>(x: &R) -> Value {
        let f = x.to_f64();
        if f.is_finite() && (f != 0.0 || x.is_zero()) {
            Value::Num(f)
        } else {
            Value::Text(x.to_sci(SIGNIFICANT_DIGITS))
        }
    }

    pub fn num(x: f64) -> Value {
        Value::Num(x)
    }

    pub fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Num(x) => canonical_number(*x),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// Rounds to 17 significant digits and emits the shortest decimal that reads
/// back to that value. Non-finite values become strings.
pub fn canonical_number(x: f64) -> Json {
    if !x.is_finite() {
        return Json::String(format!("{x}"));
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    // -0 and 0 serialize identically.
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    serde_json::Number::from_f64(rounded)
        .map(Json::Number)
        .unwrap_or_else(|| Json::String(format!("{rounded}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// One comparison in a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub lhs: Value,
    pub rhs: Value,
    pub residual: Value,
    pub tolerance: Value,
    pub status: Status,
    /// The statement in the source argument this check exercises.
    pub paper_anchor: String,
}

impl Check {
    /// Passes iff `residual <= tolerance`, otherwise fails.
    pub fn within<R: Real>(name: impl Into<String>, anchor: &str, lhs: &R, rhs: &R, residual: &R, tolerance: &R) -> Check {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Check {
            name: name.into(),
            lhs: Value::real(lhs),
            rhs: Value::real(rhs),
            residual: Value::real(residual),
            tolerance: Value::real(tolerance),
            status,
            paper_anchor: anchor.into(),
        }
    }

    /// `|lhs − rhs| <= tolerance`.
    pub fn close<R: Real>(name: impl Into<String>, anchor: &str, lhs: &R, rhs: &R, tolerance: &R) -> Check {
        let residual = (lhs.clone() - rhs.clone()).abs();
        Check::within(name, anchor, lhs, rhs, &residual, tolerance)
    }

    /// A check whose status is decided by the caller; a non-passing outcome
    /// is reported as `otherwise`.
    #[allow(clippy::too_many_arguments)]
    pub fn decided(
        name: impl Into<String>,
        anchor: &str,
        lhs: Value,
        rhs: Value,
        residual: Value,
        tolerance: Value,
        passed: bool,
        otherwise: Status,
    ) -> Check {
        Check {
            name: name.into(),
            lhs,
            rhs,
            residual,
            tolerance,
            status: if passed { Status::Pass } else { otherwise },
            paper_anchor: anchor.into(),
        }
    }

    fn to_json(&self) -> Json {
        json!({
            "name": self.name,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "residual": self.residual.to_json(),
            "tolerance": self.tolerance.to_json(),
            "status": self.status.as_str(),
            "paper_anchor": self.paper_anchor,
        })
    }
}

/// Result of one CLI command.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub trace: Option<Json>,
    /// Zero unless timing was requested, so reports stay reproducible.
    pub wall_time_ms: u64,
    pub precision_mode: String,
}

impl AuditReport {
    pub fn new(command: &str, precision_mode: String) -> Self {
        AuditReport {
            command: command.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            trace: None,
            wall_time_ms: 0,
            precision_mode,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    /// Worst status over all checks; `Pass` when there are none.
    pub fn status(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }

    /// 0 when every check passes, 1 on any failure, 3 when only inconclusive
    /// checks keep it from passing.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn to_json(&self) -> Json {
        let params: Map<String, Json> = self.params.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        json!({
            "command": self.command,
            "params": params,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "trace": self.trace.clone().unwrap_or(Json::Null),
            "wall_time_ms": self.wall_time_ms,
            "precision_mode": self.precision_mode,
        })
    }

    /// Sorted keys, two-space indent, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, self.to_canonical_string().as_bytes())
    }
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| AuditError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, bytes).map_err(|e| AuditError::Io(format!("{}: {e}", path.display())))
}

/// A table with a header row, written as CSV.
pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| AuditError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| AuditError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    write_file(path, csv_string(header, rows)?.as_bytes())
}

/// Text form of a [`Value`] for CSV cells.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Num(x) => match canonical_number(*x) {
            Json::Number(n) => n.to_string(),
            Json::String(s) => s,
            other => other.to_string(),
        },
        Value::Text(s) => s.clone(),
    }
}

fn real<R: Real>(x: &R) -> Json {
    Value::real(x).to_json()
}

fn eps_bound_json<R: Real>(e: &EpsBound<R>) -> Json {
    json!({
        "lo": real(&e.lo),
        "hi": real(&e.hi),
        "eps": real(&e.eps),
        "q_lo": real(&e.q_lo),
        "q_hi": real(&e.q_hi),
    })
}

/// Every recorded field of a search trace.
pub fn trace_json<R: Real>(t: &SearchTrace<R>) -> Json {
    json!({
        "case_label": t.case_label.name(),
        "case_path": t.case_path.iter().map(|c| c.name()).collect::<Vec<_>>(),
        "b1": real(&t.b1),
        "b2": real(&t.b2),
        "g_zeros": t.g_zeros.iter().map(real).collect::<Vec<_>>(),
        "b_prime": t.b_prime.as_ref().map(real),
        "c0": real(&t.c0),
        "eps1": real(&t.eps1),
        "eps2": t.eps2.as_ref().map(real),
        "eps0": real(&t.eps0),
        "reselections": t.reselections.iter().map(eps_bound_json).collect::<Vec<_>>(),
        "interval": [real(&t.interval.0), real(&t.interval.1)],
        "fallback": t.fallback,
        "b0": real(&t.b0),
        "f_at_b0": real(&t.f_at_b0),
        "f_tolerance": real(&t.f_tolerance),
        "norm_part_at_b0": real(&t.norm_part_at_b0),
        "cross_part_at_b0": real(&t.cross_part_at_b0),
        "h_at_b0": real(&t.h_at_b0),
        "h_threshold": real(&t.h_threshold),
        "h_nonzero": t.h_nonzero(),
        "bisection_steps": t.bisection_steps,
        "working_digits": t.working_digits,
        "required_digits": t.required_digits,
        "resolved": t.resolved(),
        "notes": t.notes,
    })
}
