//! Command-line front end. [`run`] takes the argument list and output streams
//! and returns the process exit code, so the binary is a one-liner and tests
//! can drive it in-process.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::distributed_order::{
    logspace, moment_curve, moment_curve_single, AsymptoteFit, AsymptoticLaw, DistributedOrderSolver, OrderDensity,
};
use crate::error::Error;
use crate::single_order::{self, GreenEvaluation};
use crate::verify::{run_suite, Profile, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SPEC: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VERIFY_ERROR: i32 = 3;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const TOL_RANGE: (f64, f64) = (1e-12, 1e-3);
pub const TOL_ENV: &str = "FRACGREEN_TOL";

/// Relative deviation from the predicted prefactor (and exponent, for power
/// laws) under which a fitted asymptote counts as agreeing.
pub const FIT_AGREEMENT: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "fracgreen", version, about = "Green functions and moments of time-fractional diffusion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate u(x, t) on a grid.
    Green(GreenArgs),
    /// Tabulate the second moment, optionally with asymptotic fits.
    Moments(MomentsArgs),
    /// Tabulate the time-scale functions phi_k(t).
    Phik(PhikArgs),
    /// Run the self-check suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct OrderArgs {
    /// Single order beta in (0, 1].
    #[arg(long)]
    pub single: Option<f64>,
    /// Order density: uniform | single:NU | atoms:B=W,... | two-atoms:B1,W1,B2,W2
    #[arg(long)]
    pub density: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TimeArgs {
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// START:STOP:COUNT, log-spaced and inclusive.
    #[arg(long = "t-logspace")]
    pub t_logspace: Option<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Absolute tolerance; defaults to $FRACGREEN_TOL, then 1e-8.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[command(flatten)]
    pub order: OrderArgs,
    /// START:STOP:STEP, inclusive of STOP within half a step.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Fall back to the integral representation where the series cancels.
    #[arg(long)]
    pub integral_fallback: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub order: OrderArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Fit the predicted asymptotic laws over the first and last decade.
    #[arg(long)]
    pub fit: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PhikArgs {
    #[command(flatten)]
    pub order: OrderArgs,
    /// Highest index; rows for k = 0..=K.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "fast")]
    pub profile: Profile,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A failure that ends the command before any data is produced.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            Self::Library(Error::PrecisionLoss { .. } | Error::Quadrature { .. } | Error::Tail { .. }) => EXIT_NUMERIC,
            _ => EXIT_SPEC,
        }
    }
}

fn spec(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn parse_number(tok: &str, what: &str) -> Result<f64, CliError> {
    tok.trim().parse().map_err(|_| spec(format!("{what}: cannot parse '{tok}' as a number")))
}

/// `start:stop:step`; points `start + i·step` up to `stop` within half a step.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, h] = parts[..] else {
        return Err(spec(format!("--x: expected START:STOP:STEP, got '{text}'")));
    };
    let (a, b, h) = (parse_number(a, "--x")?, parse_number(b, "--x")?, parse_number(h, "--x")?);
    if !(h > 0.0 && h.is_finite()) {
        return Err(spec(format!("--x: step '{h}' must be positive")));
    }
    if !(a.is_finite() && b.is_finite()) || b < a - 0.5 * h {
        return Err(spec(format!("--x: empty or non-finite range '{text}'")));
    }
    let n = ((b - a) / h + 0.5).floor() as usize + 1;
    if n > 1_000_000 {
        return Err(spec(format!("--x: {n} points is too many")));
    }
    Ok((0..n).map(|i| a + i as f64 * h).collect())
}

/// `start:stop:count`, log-spaced, endpoints exact.
pub fn parse_logspace(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(spec(format!("--t-logspace: expected START:STOP:COUNT, got '{text}'")));
    };
    let (a, b) = (parse_number(a, "--t-logspace")?, parse_number(b, "--t-logspace")?);
    let n: usize = n.trim().parse().map_err(|_| spec(format!("--t-logspace: cannot parse count '{n}'")))?;
    if !(a > 0.0 && b > a && b.is_finite()) || n < 2 {
        return Err(spec(format!("--t-logspace: need 0 < START < STOP and COUNT >= 2, got '{text}'")));
    }
    Ok(logspace(a, b, n))
}

fn times(args: &TimeArgs) -> Result<Vec<f64>, CliError> {
    let t = match (&args.t, &args.t_logspace) {
        (Some(t), _) => t.clone(),
        (None, Some(l)) => parse_logspace(l)?,
        (None, None) => return Err(spec("one of --t or --t-logspace is required")),
    };
    if let Some(bad) = t.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(spec(format!("--t: time '{bad}' must be positive")));
    }
    Ok(t)
}

/// `--tol`, else `$FRACGREEN_TOL`, else [`DEFAULT_TOL`]; must lie in [`TOL_RANGE`].
pub fn resolve_tol(flag: Option<f64>, env: Option<&str>) -> Result<f64, CliError> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(e)) => parse_number(e, TOL_ENV)?,
        (None, None) => DEFAULT_TOL,
    };
    if !(tol >= TOL_RANGE.0 && tol <= TOL_RANGE.1) {
        return Err(spec(format!("tolerance '{tol}' outside [{:e}, {:e}]", TOL_RANGE.0, TOL_RANGE.1)));
    }
    Ok(tol)
}

enum Order {
    Single(f64),
    Distributed(DistributedOrderSolver),
}

fn order(args: &OrderArgs) -> Result<Order, CliError> {
    match (args.single, &args.density) {
        (Some(beta), _) => {
            single_order::SingleOrderProblem::new(beta)?;
            Ok(Order::Single(beta))
        }
        (None, Some(d)) => Ok(Order::Distributed(DistributedOrderSolver::new(d.parse::<OrderDensity>()?))),
        (None, None) => Err(spec("one of --single or --density is required")),
    }
}

/// One row of `green` output. `u` and `abs_error` are `None` where the
/// evaluation failed; `method` then names the failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenRow {
    pub x: f64,
    pub t: f64,
    pub u: Option<f64>,
    pub abs_error: Option<f64>,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenOutput {
    pub density: String,
    pub tol: f64,
    pub rows: Vec<GreenRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub t: f64,
    pub mu2: Option<f64>,
    pub method: String,
}

/// A fitted asymptote next to the predicted law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub end: String,
    pub fit: AsymptoteFit,
    pub predicted: Option<AsymptoticLaw>,
    /// Largest relative deviation of exponent and prefactor from the prediction.
    pub deviation: Option<f64>,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentsOutput {
    pub density: String,
    pub tol: f64,
    pub rows: Vec<MomentRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fits: Vec<FitReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiRow {
    pub k: usize,
    pub t: f64,
    pub phi: Option<f64>,
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhikOutput {
    pub density: String,
    pub rows: Vec<PhiRow>,
}

fn failure_label(e: &Error) -> &'static str {
    match e {
        Error::PrecisionLoss { .. } => "precision_loss",
        Error::Quadrature { .. } => "quadrature_error",
        Error::Tail { .. } => "tail_error",
        Error::DegenerateDensity { .. } => "degenerate_density",
        Error::Domain(_) | Error::InvalidDensity(_) => "domain_error",
    }
}

fn is_numeric(e: &Error) -> bool {
    matches!(e, Error::PrecisionLoss { .. } | Error::Quadrature { .. } | Error::Tail { .. })
}

// Formats a value with 17 significant digits, or `nan` for a failed cell.
fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |v| format!("{v:.16e}"))
}

fn open_output<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// Evaluates the green grid. The second value reports the first numerical
/// failure, if any; its row carries `u = None`.
pub fn green_rows(args: &GreenArgs, tol: f64) -> Result<(GreenOutput, Option<Error>), CliError> {
    let order = order(&args.order)?;
    let xs = parse_grid(&args.x)?;
    let ts = times(&args.time)?;
    type Evaluator<'a> = Box<dyn Fn(f64, f64) -> crate::Result<GreenEvaluation> + 'a>;
    let (density, eval): (String, Evaluator) = match &order {
        Order::Single(beta) => {
            let beta = *beta;
            let f = if args.integral_fallback { single_order::green_with_fallback } else { single_order::green };
            (format!("single:{beta}"), Box::new(move |x, t| f(beta, x, t, tol)))
        }
        Order::Distributed(solver) => {
            let fallback = args.integral_fallback;
            let f = move |x, t| {
                if fallback {
                    solver.green_with_fallback(x, t, tol)
                } else {
                    solver.green_series(x, t, tol)
                }
            };
            (solver.density().spec_string(), Box::new(f))
        }
    };
    let mut rows = Vec::with_capacity(xs.len() * ts.len());
    let mut failure = None;
    for &t in &ts {
        for &x in &xs {
            match eval(x, t) {
                Ok(g) => rows.push(GreenRow {
                    x,
                    t,
                    u: Some(g.value),
                    abs_error: Some(g.abs_error_estimate),
                    method: g.method.as_str().into(),
                }),
                Err(e) if is_numeric(&e) => {
                    rows.push(GreenRow { x, t, u: None, abs_error: None, method: failure_label(&e).into() });
                    failure.get_or_insert(e);
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok((GreenOutput { density, tol, rows }, failure))
}

fn fit_report(end: &str, fit: Option<AsymptoteFit>, predicted: Option<AsymptoticLaw>) -> Option<FitReport> {
    let fit = fit?;
    let deviation = predicted.map(|p| {
        let pre = (fit.law.prefactor() / p.prefactor() - 1.0).abs();
        match (fit.law, p) {
            (AsymptoticLaw::Power { exponent: e, .. }, AsymptoticLaw::Power { exponent, .. }) => {
                pre.max((e / exponent - 1.0).abs())
            }
            _ => pre,
        }
    });
    Some(FitReport { end: end.into(), fit, predicted, deviation, agrees: deviation.map(|d| d <= FIT_AGREEMENT) })
}

pub fn moment_rows(args: &MomentsArgs, tol: f64) -> Result<MomentsOutput, CliError> {
    let order = order(&args.order)?;
    let ts = times(&args.time)?;
    let mut sorted = ts.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(spec("--t: times must be distinct"));
    }
    if args.fit && sorted.last().unwrap() / sorted.first().unwrap() < 100.0 * (1.0 - 1e-12) {
        return Err(spec("--fit needs times spanning at least two decades"));
    }
    let (density, curve) = match &order {
        Order::Single(beta) => (format!("single:{beta}"), moment_curve_single(*beta, &sorted)?),
        Order::Distributed(solver) => (solver.density().spec_string(), moment_curve(solver.density(), &sorted, tol)?),
    };
    let rows = ts
        .iter()
        .map(|t| {
            let i = sorted.iter().position(|s| s == t).unwrap_or(0);
            MomentRow { t: *t, mu2: Some(curve.mu2[i]), method: curve.method.as_str().into() }
        })
        .collect();
    let fits = if args.fit {
        [
            fit_report("small_t", curve.fit_small_t(), curve.asymptote_small_t),
            fit_report("large_t", curve.fit_large_t(), curve.asymptote_large_t),
        ]
        .into_iter()
        .flatten()
        .collect()
    } else {
        Vec::new()
    };
    Ok(MomentsOutput { density, tol, rows, fits })
}

pub fn phik_rows(args: &PhikArgs) -> Result<(PhikOutput, Option<Error>), CliError> {
    let solver = match order(&args.order)? {
        Order::Single(beta) => DistributedOrderSolver::new(OrderDensity::single(beta)?),
        Order::Distributed(s) => s,
    };
    let ts = times(&args.time)?;
    let mut rows = Vec::new();
    let mut failure = None;
    for &t in &ts {
        for k in 0..=args.k {
            match solver.phi(k, t) {
                Ok(p) => rows.push(PhiRow { k, t, phi: Some(p.value), abs_error: Some(p.abs_error) }),
                Err(e) if is_numeric(&e) => {
                    rows.push(PhiRow { k, t, phi: None, abs_error: None });
                    failure.get_or_insert(e);
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok((PhikOutput { density: solver.density().spec_string(), rows }, failure))
}

fn law_fields(law: &AsymptoticLaw) -> String {
    match law {
        AsymptoticLaw::Power { exponent, prefactor } => {
            format!("law=power exponent={exponent:.6} prefactor={prefactor:.6}")
        }
        AsymptoticLaw::Log { prefactor } => format!("law=log prefactor={prefactor:.6}"),
        AsymptoticLaw::TLogInverse { prefactor } => format!("law=t_log_inverse prefactor={prefactor:.6}"),
    }
}

fn write_green(out: &mut dyn Write, data: &GreenOutput, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, data),
        Format::Csv => {
            writeln!(out, "x,t,u,abs_error,method")?;
            for r in &data.rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    cell(Some(r.x)),
                    cell(Some(r.t)),
                    cell(r.u),
                    cell(r.abs_error),
                    r.method
                )?;
            }
            Ok(())
        }
    }
}

fn write_moments(out: &mut dyn Write, data: &MomentsOutput, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, data),
        Format::Csv => {
            writeln!(out, "t,mu2,method")?;
            for r in &data.rows {
                writeln!(out, "{},{},{}", cell(Some(r.t)), cell(r.mu2), r.method)?;
            }
            for f in &data.fits {
                write!(
                    out,
                    "# fit {} t={:e}..{:e} {} residual={:.3e}",
                    f.end,
                    f.fit.t_min,
                    f.fit.t_max,
                    law_fields(&f.fit.law),
                    f.fit.residual
                )?;
                if let (Some(p), Some(d), Some(ok)) = (&f.predicted, f.deviation, f.agrees) {
                    write!(out, " | predicted {} deviation={:.4} agrees={ok}", law_fields(p), d)?;
                }
                writeln!(out)?;
            }
            Ok(())
        }
    }
}

fn write_phik(out: &mut dyn Write, data: &PhikOutput, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, data),
        Format::Csv => {
            writeln!(out, "k,t,phi,abs_error")?;
            for r in &data.rows {
                writeln!(out, "{},{},{},{}", r.k, cell(Some(r.t)), cell(r.phi), cell(r.abs_error))?;
            }
            Ok(())
        }
    }
}

fn write_verify(out: &mut dyn Write, report: &VerifyReport) -> Result<(), CliError> {
    write_json(out, report)
}

fn dispatch(cli: Cli, env_tol: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let numeric = |stderr: &mut dyn Write, e: Option<Error>| -> Result<i32, CliError> {
        Ok(match e {
            Some(e) => {
                writeln!(stderr, "fracgreen: {e}")?;
                EXIT_NUMERIC
            }
            None => EXIT_OK,
        })
    };
    match cli.command {
        Command::Green(args) => {
            let tol = resolve_tol(args.out.tol, env_tol)?;
            let (data, failure) = green_rows(&args, tol)?;
            let mut out = open_output(&args.out.output, stdout)?;
            write_green(&mut *out, &data, args.out.format)?;
            out.flush()?;
            numeric(stderr, failure)
        }
        Command::Moments(args) => {
            let tol = resolve_tol(args.out.tol, env_tol)?;
            let data = moment_rows(&args, tol)?;
            let mut out = open_output(&args.out.output, stdout)?;
            write_moments(&mut *out, &data, args.out.format)?;
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Phik(args) => {
            let (data, failure) = phik_rows(&args)?;
            let mut out = open_output(&args.out.output, stdout)?;
            write_phik(&mut *out, &data, args.out.format)?;
            out.flush()?;
            numeric(stderr, failure)
        }
        Command::Verify(args) => {
            let report = run_suite(args.profile);
            let mut out = open_output(&args.output, stdout)?;
            write_verify(&mut *out, &report)?;
            out.flush()?;
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.check_name.as_str()).collect();
            writeln!(
                stderr,
                "{} checks, {} failed{}",
                report.checks.len(),
                failed.len(),
                if failed.is_empty() { String::new() } else { format!(": {}", failed.join(", ")) }
            )?;
            Ok(report.exit_code())
        }
    }
}

/// Parses `args` (program name first) and runs the command. `env_tol` is the
/// value of `$FRACGREEN_TOL`, if set.
pub fn run<I, S>(args: I, env_tol: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                EXIT_SPEC
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
        }
    };
    match dispatch(cli, env_tol, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "fracgreen: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("fracgreen").chain(args.iter().copied()), None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:2:1").unwrap(), vec![0.0, 1.0, 2.0]);
        assert_eq!(parse_grid("0:0:1").unwrap(), vec![0.0]);
        assert_eq!(parse_grid("0:1.04:0.5").unwrap().len(), 3);
        assert_eq!(parse_grid("0:1.26:0.5").unwrap().len(), 4);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a:1:1").unwrap_err().to_string().contains("'a'"));
    }

    #[test]
    fn tolerance_resolution() {
        assert_eq!(resolve_tol(None, None).unwrap(), 1e-8);
        assert_eq!(resolve_tol(None, Some("1e-10")).unwrap(), 1e-10);
        assert_eq!(resolve_tol(Some(1e-6), Some("1e-10")).unwrap(), 1e-6);
        assert!(resolve_tol(Some(1e-13), None).is_err());
        assert!(resolve_tol(None, Some("big")).is_err());
    }

    #[test]
    fn green_gaussian_rows() {
        let (code, out, _) = run_str(&["green", "--single", "1.0", "--x", "0:2:1", "--t", "1"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "x,t,u,abs_error,method");
        // (1/(2√π)) e^{−x²/4}, within the reported error estimate.
        for (line, x) in lines[1..].iter().zip([0.0f64, 1.0, 2.0]) {
            let cols: Vec<f64> = line.split(',').take(4).map(|c| c.parse().unwrap()).collect();
            let want = (-x * x / 4.0).exp() / (2.0 * std::f64::consts::PI.sqrt());
            assert!((cols[2] - want).abs() <= cols[3] && cols[3] <= 1e-8, "{line}");
        }
    }

    #[test]
    fn unnormalized_density_is_a_spec_error() {
        let (code, _, err) = run_str(&["green", "--density", "atoms:0.5=0.5", "--x", "0:0:1", "--t", "1"]);
        assert_eq!(code, EXIT_SPEC);
        assert!(err.contains("normalized"), "{err}");
    }

    #[test]
    fn precision_loss_keeps_rows() {
        let (code, out, _) = run_str(&["green", "--single", "0.25", "--x", "0:30:10", "--t", "1", "--tol", "1e-12"]);
        assert_eq!(code, EXIT_NUMERIC);
        assert_eq!(out.lines().count(), 5);
        assert!(out.contains("nan,nan,precision_loss"), "{out}");
        let (code, out, _) = run_str(&[
            "green",
            "--single",
            "0.25",
            "--x",
            "0:30:10",
            "--t",
            "1",
            "--tol",
            "1e-12",
            "--integral-fallback",
        ]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("hankel_integral"));
    }

    #[test]
    fn moments_values() {
        let (code, out, _) = run_str(&["moments", "--single", "1.0", "--t", "3"]);
        assert_eq!(code, 0);
        let mu: f64 = out.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert!((mu - 6.0).abs() < 1e-14);
        let (code, _, err) = run_str(&["moments", "--single", "0.5", "--t", "1,2", "--fit"]);
        assert_eq!(code, EXIT_SPEC);
        assert!(err.contains("two decades"));
    }

    #[test]
    fn missing_order_is_rejected() {
        let (code, _, _) = run_str(&["green", "--x", "0:1:1", "--t", "1"]);
        assert_eq!(code, EXIT_SPEC);
        let (code, _, _) = run_str(&["green", "--single", "0.5", "--density", "uniform", "--x", "0:1:1", "--t", "1"]);
        assert_eq!(code, EXIT_SPEC);
    }
}
