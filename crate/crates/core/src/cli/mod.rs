//! Command-line driver: argument parsing, configuration, output files and
//! exit codes.
//!
//! Exit codes: 0 when every check passes, 1 when any fails, 2 on usage or
//! configuration errors, 3 when only inconclusive checks remain.

pub mod commands;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::Value as Json;

use crate::error::{AuditError, Result};
use crate::numerics::PrecisionContext;
use crate::report::svg::line_plot;
use crate::report::{csv_string, write_csv, write_file, AuditReport};
use crate::special::XiMethod;
use commands::MethodChoice;

/// Environment variable read when neither a flag nor the config sets precision.
pub const PREC_ENV: &str = "XI_AUDIT_PREC";

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "xi-audit", version, about = "Audit toolkit for the Xi-function boundary-value construction")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct Global {
    /// Arithmetic: f64 or dec:<digits>.
    #[arg(long, global = true)]
    pub prec: Option<String>,
    /// Report path; a directory for `sweep`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot to this path.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Flat JSON object of defaults; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for `sweep`.
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
    /// Record wall-clock time in the report (breaks byte reproducibility).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate Xi(t1 + i t2) by one or both methods.
    EvalXi {
        #[arg(long, visible_alias = "t", allow_hyphen_values = true)]
        t1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t2: Option<f64>,
        /// product, fourier or both.
        #[arg(long)]
        method: Option<String>,
    },
    /// Scan the real axis for sign changes of Xi.
    FindZeros {
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        method: Option<String>,
        /// Write the zeros found as a zero table.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Read a zero table and confirm each entry.
    LoadZeros {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Energy identity and the split of h at one point.
    AuditIdentity {
        #[arg(long, allow_hyphen_values = true)]
        t1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t2: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Re-derive the imaginary-part expansion and compare with the printed forms.
    AuditSymbolic,
    /// Sign lemmas for Q, g1..g4 and F.
    AuditSigns {
        /// Comma-separated alpha values.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        #[arg(long)]
        t2: Option<f64>,
        /// Also report Q at this sigma.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Sign search for a candidate zero t1 + i t2.
    Verdict {
        #[arg(long, allow_hyphen_values = true)]
        t1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t2: Option<f64>,
    },
    /// Sign checks over an alpha grid, one report per point plus a CSV roll-up.
    Sweep {
        #[arg(long)]
        alpha_min: Option<f64>,
        #[arg(long)]
        alpha_max: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        t2: Option<f64>,
    },
}

const CONFIG_KEYS: [&str; 20] = [
    "prec", "out", "svg", "parallel", "timing", "t1", "t2", "b", "eps", "alpha", "sigma", "method", "t_min",
    "t_max", "step", "table", "file", "count", "alpha_min", "alpha_max",
];

/// Flat key-value defaults read from `--config`.
#[derive(Debug, Default)]
pub struct Config(BTreeMap<String, Json>);

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let v: Json = serde_json::from_str(text).map_err(|e| AuditError::InvalidInput(format!("config: {e}")))?;
        let Json::Object(map) = v else {
            return Err(AuditError::InvalidInput("config must be a JSON object".into()));
        };
        let mut out = BTreeMap::new();
        for (k, v) in map {
            let key = k.replace('-', "_");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(AuditError::InvalidInput(format!("config: unknown key '{k}'")));
            }
            if v.is_object() || (v.is_array() && key != "alpha") {
                return Err(AuditError::InvalidInput(format!("config: '{k}' must be a scalar")));
            }
            out.insert(key, v);
        }
        Ok(Config(out))
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| AuditError::Io(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| AuditError::InvalidInput(format!("config: '{key}' must be a number"))),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| AuditError::InvalidInput(format!("config: '{key}' must be a non-negative integer"))),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Json::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(AuditError::InvalidInput(format!("config: '{key}' must be a string"))),
        }
    }

    fn bool(&self, key: &str) -> Result<bool> {
        match self.0.get(key) {
            None => Ok(false),
            Some(Json::Bool(b)) => Ok(*b),
            Some(_) => Err(AuditError::InvalidInput(format!("config: '{key}' must be true or false"))),
        }
    }

    fn alphas(&self) -> Result<Vec<f64>> {
        match self.0.get("alpha") {
            None => Ok(Vec::new()),
            Some(Json::Array(a)) => a
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| AuditError::InvalidInput("config: 'alpha' entries must be numbers".into())))
                .collect(),
            Some(v) => v
                .as_f64()
                .map(|x| vec![x])
                .ok_or_else(|| AuditError::InvalidInput("config: 'alpha' must be a number or list".into())),
        }
    }
}

/// Precision from flag, then config, then `XI_AUDIT_PREC`, then binary64.
pub fn resolve_precision(flag: Option<&str>, config: &Config, env: Option<&str>) -> Result<PrecisionContext> {
    let from_config = config.string("prec")?;
    let text = flag.map(str::to_string).or(from_config).or(env.map(str::to_string));
    match text {
        None => Ok(PrecisionContext::binary64()),
        Some(t) => PrecisionContext::binary64().with_mode(PrecisionContext::parse_mode(&t)?),
    }
}

fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

fn required(flag: Option<f64>, config: &Config, key: &str) -> Result<f64> {
    flag.or(config.f64(key)?)
        .ok_or_else(|| AuditError::InvalidInput(format!("missing --{}", key.replace('_', "-"))))
}

struct Settings {
    ctx: PrecisionContext,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    parallel: Option<usize>,
    timing: bool,
}

/// Output of one command before it is written.
struct Outcome {
    report: AuditReport,
    plot: Option<String>,
}

fn plain(report: AuditReport) -> Outcome {
    Outcome { report, plot: None }
}

fn method(flag: Option<String>, config: &Config, default: &str) -> Result<String> {
    Ok(flag.or(config.string("method")?).unwrap_or_else(|| default.to_string()))
}

fn execute(cmd: Command, config: &Config, s: &Settings) -> Result<Outcome> {
    let ctx = &s.ctx;
    match cmd {
        Command::EvalXi { t1, t2, method: m } => {
            let t1 = required(t1, config, "t1")?;
            let t2 = pick(t2, config.f64("t2")?, 0.0);
            let m: MethodChoice = method(m, config, "both")?.parse()?;
            Ok(plain(commands::eval_xi(t1, t2, m, ctx)?))
        }
        Command::FindZeros { t_min, t_max, step, method: m, table } => {
            let t_min = required(t_min, config, "t_min")?;
            let t_max = required(t_max, config, "t_max")?;
            let step = pick(step, config.f64("step")?, 0.05);
            let m: XiMethod = method(m, config, "product")?.parse()?;
            let (report, zeros) = commands::find_zeros(t_min, t_max, step, m, ctx)?;
            let table = table.or(config.string("table")?.map(PathBuf::from));
            if let Some(path) = table {
                write_file(&path, commands::zero_table_text(&zeros, m).as_bytes())?;
            }
            Ok(plain(report))
        }
        Command::LoadZeros { file } => {
            let file = file
                .or(config.string("file")?.map(PathBuf::from))
                .ok_or_else(|| AuditError::InvalidInput("missing --file".into()))?;
            Ok(plain(commands::load_zeros(&file, ctx)?))
        }
        Command::AuditIdentity { t1, t2, b, eps } => {
            let t1 = required(t1, config, "t1")?;
            let t2 = required(t2, config, "t2")?;
            let b = required(b, config, "b")?;
            let eps = required(eps, config, "eps")?;
            Ok(plain(commands::audit_identity(t1, t2, b, eps, ctx)?))
        }
        Command::AuditSymbolic => Ok(plain(commands::audit_symbolic()?)),
        Command::AuditSigns { alpha, t2, sigma } => {
            let alphas = if alpha.is_empty() { config.alphas()? } else { alpha };
            let alphas = if alphas.is_empty() { commands::ALPHA_GRID.to_vec() } else { alphas };
            let t2 = pick(t2, config.f64("t2")?, 0.25);
            let sigma = sigma.or(config.f64("sigma")?);
            let report = commands::audit_signs(&alphas, t2, sigma, ctx)?;
            let plot = s.svg.as_ref().map(|_| commands::q_plot(alphas[0], ctx));
            Ok(Outcome { report, plot })
        }
        Command::Verdict { t1, t2 } => {
            let t1 = required(t1, config, "t1")?;
            let t2 = required(t2, config, "t2")?;
            let run = commands::verdict_report(t1, t2, ctx, s.svg.is_some())?;
            let plot = s.svg.as_ref().map(|_| commands::verdict_plot(t1, t2, run.plot.as_deref().unwrap_or(&[])));
            Ok(Outcome { report: run.report, plot })
        }
        Command::Sweep { .. } => unreachable!("sweep is dispatched separately"),
    }
}

fn run_sweep(
    alpha_min: Option<f64>,
    alpha_max: Option<f64>,
    count: Option<usize>,
    t2: Option<f64>,
    config: &Config,
    s: &Settings,
) -> Result<i32> {
    let lo = pick(alpha_min, config.f64("alpha_min")?, 13.0);
    let hi = pick(alpha_max, config.f64("alpha_max")?, 100.0);
    let count = pick(count, config.usize("count")?, 10);
    let t2 = pick(t2, config.f64("t2")?, 0.25);
    let alphas = commands::alpha_range(lo, hi, count)?;
    let threads = s.parallel.unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AuditError::InvalidInput(format!("--parallel: {e}")))?;
    let start = Instant::now();
    let (mut reports, rows) = pool.install(|| commands::sweep(&alphas, t2, &s.ctx))?;
    let elapsed = start.elapsed().as_millis() as u64;
    if s.timing {
        for r in &mut reports {
            r.wall_time_ms = elapsed;
        }
    }
    match &s.out {
        Some(dir) => {
            for (k, r) in reports.iter().enumerate() {
                r.write(&dir.join(format!("point_{k:03}.json")))?;
            }
            write_csv(&dir.join("sweep.csv"), &commands::SWEEP_HEADER, &rows)?;
        }
        None => print!("{}", csv_string(&commands::SWEEP_HEADER, &rows)?),
    }
    if let Some(path) = &s.svg {
        let pts: Vec<(f64, f64)> = reports
            .iter()
            .zip(&alphas)
            .filter_map(|(r, &a)| match &r.checks[0].lhs {
                crate::report::Value::Num(q) => Some((a, crate::report::svg::signed_log(q.signum() as i32, q.abs().ln()))),
                _ => None,
            })
            .collect();
        write_file(path, line_plot("Q(b1) across the alpha grid", "alpha", "sign(Q) log10(1 + |Q|)", &pts).as_bytes())?;
    }
    Ok(reports.iter().map(AuditReport::exit_code).max_by_key(|c| severity(*c)).unwrap_or(0))
}

fn severity(code: i32) -> i32 {
    match code {
        0 => 0,
        3 => 1,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let config = match &cli.global.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let env = std::env::var(PREC_ENV).ok();
    let ctx = resolve_precision(cli.global.prec.as_deref(), &config, env.as_deref())?;
    let settings = Settings {
        ctx,
        out: cli.global.out.or(config.string("out")?.map(PathBuf::from)),
        svg: cli.global.svg.or(config.string("svg")?.map(PathBuf::from)),
        parallel: cli.global.parallel.or(config.usize("parallel")?),
        timing: cli.global.timing || config.bool("timing")?,
    };
    if settings.parallel == Some(0) {
        return Err(AuditError::InvalidInput("--parallel needs at least 1 worker".into()));
    }
    if let Command::Sweep { alpha_min, alpha_max, count, t2 } = cli.command {
        return run_sweep(alpha_min, alpha_max, count, t2, &config, &settings);
    }
    let start = Instant::now();
    let name = command_name(&cli.command);
    let mut outcome = execute(cli.command, &config, &settings)?;
    if settings.timing {
        outcome.report.wall_time_ms = start.elapsed().as_millis() as u64;
    }
    match &settings.out {
        Some(p) => outcome.report.write(p)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.report.to_canonical_string().as_bytes())
                .map_err(|e| AuditError::Io(e.to_string()))?;
        }
    }
    if let Some(path) = &settings.svg {
        let svg = outcome
            .plot
            .unwrap_or_else(|| line_plot(&format!("{name}: no plotted quantity"), "x", "y", &[]));
        write_file(path, svg.as_bytes())?;
    }
    Ok(outcome.report.exit_code())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::EvalXi { .. } => "eval-xi",
        Command::FindZeros { .. } => "find-zeros",
        Command::LoadZeros { .. } => "load-zeros",
        Command::AuditIdentity { .. } => "audit-identity",
        Command::AuditSymbolic => "audit-symbolic",
        Command::AuditSigns { .. } => "audit-signs",
        Command::Verdict { .. } => "verdict",
        Command::Sweep { .. } => "sweep",
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("xi-audit: {e}");
            if e.is_usage_error() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(Config::parse(r#"{"t1": 13, "colour": "red"}"#).is_err());
        assert!(Config::parse("[1, 2]").is_err());
        let c = Config::parse(r#"{"t1": 13, "t-min": 10, "alpha": [13, 20]}"#).unwrap();
        assert_eq!(c.f64("t_min").unwrap(), Some(10.0));
        assert_eq!(c.alphas().unwrap(), vec![13.0, 20.0]);
    }

    #[test]
    fn precision_precedence() {
        let cfg = Config::parse(r#"{"prec": "dec:40"}"#).unwrap();
        let none = Config::default();
        assert_eq!(resolve_precision(Some("dec:30"), &cfg, Some("dec:60")).unwrap().label(), "dec:30");
        assert_eq!(resolve_precision(None, &cfg, Some("dec:60")).unwrap().label(), "dec:40");
        assert_eq!(resolve_precision(None, &none, Some("dec:60")).unwrap().label(), "dec:60");
        assert_eq!(resolve_precision(None, &none, None).unwrap().label(), "f64");
        assert!(resolve_precision(Some("dec:5"), &none, None).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["xi-audit", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run(["xi-audit", "eval-xi"]), EXIT_USAGE);
        assert_eq!(run(["xi-audit", "--prec", "dec:3", "eval-xi", "--t", "0"]), EXIT_USAGE);
    }
}
