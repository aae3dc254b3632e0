//! The `gftkit` command line.
//!
//! Exit codes: 0 success, 1 verification found violations, 2 usage or
//! precondition error, 3 I/O error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::pseudo::{
    fs_branch, fs_decomposition_signed, fs_envelope, fs_functional, ghs_closed_form, ghs_series,
    lhs_closed_form, lhs_series, solve_coeffs, BoundSet, ClassParams, FsBranch, Lambda,
};
use crate::series::{NormalizedFn, MAX_ORDER};
use crate::shell::{self, curve_samples, fib, fib_closed_form, ptilde_coeff, ptilde_quotient_series};
use crate::verify::{self, ShellGrid, VerifyReport};

pub const SEED_ENV: &str = "GFTKIT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Shell,
    Expansions,
    Bounds,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "gftkit", version, about = "Coefficient bounds for λ-pseudo bi-starlike functions tied to the shell-like Fibonacci function")]
pub struct Cli {
    /// Output format (each command has its own default).
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,
    /// RNG seed; the GFTKIT_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form bounds on |a2|, |a3| and |a3 - μ a2²| for one (λ, μ).
    Bounds {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
    },
    /// Bounds over a λ grid.
    BoundsTable {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        step: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
    },
    /// Fekete–Szegő details for one (λ, μ), optionally at a tuple (c2, d2).
    Fs {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true, requires = "d2")]
        c2: Option<f64>,
        #[arg(long, allow_negative_numbers = true, requires = "c2")]
        d2: Option<f64>,
    },
    /// Samples of p̃(re^{it}) as `t,x,y` rows.
    Curve {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        exclusion: f64,
    },
    /// Fibonacci numbers u_0..=u_n with the Binet cross-check.
    Fib {
        #[arg(long)]
        n: usize,
    },
    /// Coefficients of p̃ from the Fibonacci law and from series division.
    Ptilde {
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Run a verification suite; exits 0 iff there are no violations.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
        trials: u64,
    },
    /// Series of z(f')^λ/f and w(g')^λ/g for f = z + a2 z² + a3 z³.
    Expand {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a2: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a3: f64,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Rendered output and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, exit_code: 0 }
    }
}

/// Formats with 10 significant digits and a `.` decimal separator.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..10).contains(&exp) {
        format!("{:.*}", (9 - exp).max(0) as usize, x)
    } else {
        format!("{x:.9e}")
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn lambda(x: f64) -> Result<Lambda, CliError> {
    Ok(Lambda::new(x)?)
}

/// The effective seed: `GFTKIT_SEED` when set, otherwise `--seed`.
pub fn effective_seed(flag: u64, env: Option<String>) -> Result<u64, CliError> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
        None => Ok(flag),
    }
}

/// Runs a parsed command line. Output is written to `--out` when given and
/// also returned.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let seed = effective_seed(cli.seed, std::env::var(SEED_ENV).ok())?;
    let outcome = dispatch(cli, seed)?;
    if let Some(path) = &cli.out {
        std::fs::write(path, &outcome.text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(outcome)
}

fn dispatch(cli: &Cli, seed: u64) -> Result<Outcome, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Bounds { lambda, mu } => cmd_bounds(*lambda, *mu, fmt.unwrap_or(OutputFormat::Table)),
        Command::BoundsTable {
            lambda_min,
            lambda_max,
            step,
            mu,
        } => cmd_bounds_table(*lambda_min, *lambda_max, *step, *mu, fmt.unwrap_or(OutputFormat::Csv)),
        Command::Fs { lambda, mu, c2, d2 } => {
            cmd_fs(*lambda, *mu, c2.zip(*d2), fmt.unwrap_or(OutputFormat::Table))
        }
        Command::Curve { r, samples, exclusion } => {
            cmd_curve(*r, *samples, *exclusion, fmt.unwrap_or(OutputFormat::Csv))
        }
        Command::Fib { n } => cmd_fib(*n, fmt.unwrap_or(OutputFormat::Table)),
        Command::Ptilde { order } => cmd_ptilde(*order, fmt.unwrap_or(OutputFormat::Table)),
        Command::Verify { suite, samples, trials } => {
            cmd_verify(*suite, seed, *samples, *trials, fmt.unwrap_or(OutputFormat::Json))
        }
        Command::Expand { lambda, a2, a3, order } => {
            cmd_expand(*lambda, *a2, *a3, *order, fmt.unwrap_or(OutputFormat::Table))
        }
    }
}

const BOUNDS_HEADER: &str = "lambda,a2_bound,a2_simple,a3_bound,fs_h,fs_bound";

fn bounds_csv_row(b: &BoundSet) -> String {
    [b.lambda, b.a2_bound, b.a2_simple_bound, b.a3_bound, b.fs_h, b.fs_bound]
        .iter()
        .map(|&x| sig10(x))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn cmd_bounds(lambda: f64, mu: f64, fmt: OutputFormat) -> Result<Outcome, CliError> {
    let b = BoundSet::new(ClassParams::new(lambda, mu)?);
    let text = match fmt {
        OutputFormat::Json => json(&b),
        OutputFormat::Csv => format!("{BOUNDS_HEADER}\n{}\n", bounds_csv_row(&b)),
        OutputFormat::Table => {
            let rows = [
                ("lambda", b.lambda),
                ("mu", b.mu),
                ("a2_bound", b.a2_bound),
                ("a2_simple", b.a2_simple_bound),
                ("a3_bound", b.a3_bound),
                ("fs_h", b.fs_h),
                ("fs_threshold", b.fs_threshold),
                ("fs_bound", b.fs_bound),
            ];
            rows.iter()
                .map(|(k, v)| format!("{k:<14}{}\n", sig10(*v)))
                .collect()
        }
    };
    Ok(Outcome::ok(text))
}

/// `λ_min, λ_min + step, …` up to `λ_max`; a single point when `step`
/// exceeds the range.
pub fn lambda_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    Lambda::new(min)?;
    if !(max >= min) || !max.is_finite() {
        return Err(CliError::Usage(format!(
            "invalid λ range: need 1 ≤ lambda_min ≤ lambda_max, got [{min}, {max}]"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::Usage(format!("step must be positive, got {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| min + k as f64 * step).collect())
}

pub fn cmd_bounds_table(
    lambda_min: f64,
    lambda_max: f64,
    step: f64,
    mu: f64,
    fmt: OutputFormat,
) -> Result<Outcome, CliError> {
    let rows = lambda_grid(lambda_min, lambda_max, step)?
        .into_iter()
        .map(|l| Ok(BoundSet::new(ClassParams::new(l, mu)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match fmt {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => {
            let mut s = format!("{BOUNDS_HEADER}\n");
            for b in &rows {
                s.push_str(&bounds_csv_row(b));
                s.push('\n');
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            let cols = ["lambda", "a2_bound", "a2_simple", "a3_bound", "fs_h", "fs_bound"];
            for c in cols {
                let _ = write!(s, "{c:>16}");
            }
            s.push('\n');
            for b in &rows {
                for v in [b.lambda, b.a2_bound, b.a2_simple_bound, b.a3_bound, b.fs_h, b.fs_bound] {
                    let _ = write!(s, "{:>16}", sig10(v));
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Serialize)]
struct FsReport {
    lambda: f64,
    mu: f64,
    h: f64,
    threshold: f64,
    branch: FsBranch,
    bound: f64,
    envelope: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tuple: Option<FsTuple>,
}

#[derive(Debug, Serialize)]
struct FsTuple {
    c2: f64,
    d2: f64,
    value: f64,
    decomposition: f64,
    exceeds_bound: bool,
}

pub fn cmd_fs(
    lambda_value: f64,
    mu: f64,
    tuple: Option<(f64, f64)>,
    fmt: OutputFormat,
) -> Result<Outcome, CliError> {
    let p = ClassParams::new(lambda_value, mu)?;
    let b = BoundSet::new(p);
    let l = p.lambda;
    let tuple = match tuple {
        Some((c2, d2)) => {
            if c2.abs() > 2.0 || d2.abs() > 2.0 {
                return Err(CliError::Usage(format!(
                    "admissible tuples need |c2|, |d2| ≤ 2, got ({c2}, {d2})"
                )));
            }
            let (c2c, d2c) = (Complex64::new(c2, 0.0), Complex64::new(d2, 0.0));
            let value = fs_functional(&solve_coeffs(c2c, d2c, l), mu).norm();
            Some(FsTuple {
                c2,
                d2,
                value,
                decomposition: fs_decomposition_signed(c2c, d2c, mu, l).norm(),
                exceeds_bound: value > b.fs_bound * (1.0 + verify::RATIO_TOL),
            })
        }
        None => None,
    };
    let r = FsReport {
        lambda: b.lambda,
        mu,
        h: b.fs_h,
        threshold: b.fs_threshold,
        branch: fs_branch(mu, l),
        bound: b.fs_bound,
        envelope: fs_envelope(mu, l),
        tuple,
    };
    let text = match fmt {
        OutputFormat::Json => json(&r),
        OutputFormat::Csv => {
            let mut s = "lambda,mu,h,threshold,branch,bound,envelope\n".to_string();
            let branch = match r.branch {
                FsBranch::Threshold => "threshold",
                FsBranch::Linear => "linear",
            };
            let _ = writeln!(
                s,
                "{},{},{},{},{branch},{},{}",
                sig10(r.lambda),
                sig10(r.mu),
                sig10(r.h),
                sig10(r.threshold),
                sig10(r.bound),
                sig10(r.envelope)
            );
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            for (k, v) in [
                ("lambda", r.lambda),
                ("mu", r.mu),
                ("h", r.h),
                ("threshold", r.threshold),
                ("bound", r.bound),
                ("envelope", r.envelope),
            ] {
                let _ = writeln!(s, "{k:<14}{}", sig10(v));
            }
            let _ = writeln!(s, "{:<14}{:?}", "branch", r.branch);
            if let Some(t) = &r.tuple {
                let _ = writeln!(s, "{:<14}({}, {})", "tuple", sig10(t.c2), sig10(t.d2));
                let _ = writeln!(s, "{:<14}{}", "value", sig10(t.value));
                let _ = writeln!(s, "{:<14}{}", "exceeds_bound", t.exceeds_bound);
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

pub fn cmd_curve(r: f64, samples: usize, exclusion: f64, fmt: OutputFormat) -> Result<Outcome, CliError> {
    let pts = curve_samples(r, samples, exclusion)?;
    let text = match fmt {
        OutputFormat::Json => json(&pts),
        OutputFormat::Csv | OutputFormat::Table => {
            let mut s = String::from("t,x,y\n");
            for p in &pts {
                let _ = writeln!(s, "{},{},{}", sig10(p.t), sig10(p.x), sig10(p.y));
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Serialize)]
struct FibRow {
    n: usize,
    /// Exact value as a decimal string (exceeds the JSON-safe integer range).
    value: String,
    closed_form: f64,
}

pub fn cmd_fib(n: usize, fmt: OutputFormat) -> Result<Outcome, CliError> {
    fib(n)?;
    let seq = shell::FibSequence::up_to(n)?;
    let rows: Vec<FibRow> = seq
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| FibRow {
            n: k,
            value: v.to_string(),
            closed_form: fib_closed_form(k),
        })
        .collect();
    let text = match fmt {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => {
            let mut s = "n,value,closed_form\n".to_string();
            for r in &rows {
                let _ = writeln!(s, "{},{},{}", r.n, r.value, sig10(r.closed_form));
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "{:>4}  {:>40}  {:>18}", r.n, r.value, sig10(r.closed_form));
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Serialize)]
struct PtildeRow {
    n: usize,
    fibonacci_law: f64,
    quotient: f64,
    difference: f64,
}

pub fn cmd_ptilde(order: usize, fmt: OutputFormat) -> Result<Outcome, CliError> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_ORDER,
        }
        .into());
    }
    let quotient = ptilde_quotient_series(order)?;
    let rows = (0..=order)
        .map(|n| {
            let law = ptilde_coeff(n)?;
            let q = quotient.coeff(n).re;
            Ok(PtildeRow {
                n,
                fibonacci_law: law,
                quotient: q,
                difference: (law - q).abs(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let text = match fmt {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => {
            let mut s = "n,fibonacci_law,quotient,difference\n".to_string();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.n,
                    sig10(r.fibonacci_law),
                    sig10(r.quotient),
                    sig10(r.difference)
                );
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>3}  {:>18}  {:>18}  {:>18}",
                    r.n,
                    sig10(r.fibonacci_law),
                    sig10(r.quotient),
                    sig10(r.difference)
                );
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

pub fn run_suite(suite: Suite, seed: u64, samples: u64, trials: u64) -> Result<VerifyReport, CliError> {
    let report = match suite {
        Suite::Shell => verify::verify_shell(&ShellGrid::default(), seed)?,
        Suite::Expansions => {
            verify::verify_expansions(trials, seed, crate::series::DEFAULT_ORDER)?
        }
        Suite::Bounds => verify::verify_bounds(
            &verify::ACCEPTANCE_LAMBDAS,
            &verify::ACCEPTANCE_MUS,
            samples,
            seed,
        )?,
        Suite::All => verify::verify_all(seed, samples, trials)?,
    };
    Ok(report)
}

pub fn cmd_verify(
    suite: Suite,
    seed: u64,
    samples: u64,
    trials: u64,
    fmt: OutputFormat,
) -> Result<Outcome, CliError> {
    let report = run_suite(suite, seed, samples, trials)?;
    let text = match fmt {
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Csv => {
            let mut s = "check,count,violations,worst\n".to_string();
            for (name, c) in &report.checks {
                let _ = writeln!(s, "{name},{},{},{}", c.count, c.violations, sig10(c.worst));
            }
            s
        }
        OutputFormat::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "suite {} seed {} samples {}", report.suite, report.seed, report.samples);
            for (name, c) in &report.checks {
                let _ = writeln!(
                    s,
                    "{:<26}{:>10}{:>6}  {}",
                    name,
                    c.count,
                    c.violations,
                    sig10(c.worst)
                );
            }
            let _ = writeln!(s, "max_ratio_a2 {}", sig10(report.max_ratio_a2));
            let _ = writeln!(s, "max_ratio_a3 {}", sig10(report.max_ratio_a3));
            let _ = writeln!(s, "max_ratio_fs {}", sig10(report.max_ratio_fs));
            let _ = writeln!(s, "flagged_fs_tuples {}", report.flagged_fs_tuples);
            let _ = writeln!(s, "violations {}", report.violations);
            s
        }
    };
    Ok(Outcome {
        text,
        exit_code: if report.passed() { 0 } else { 1 },
    })
}

#[derive(Debug, Serialize)]
struct ExpandRow {
    k: usize,
    lhs: Complex64,
    ghs: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs_predicted: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ghs_predicted: Option<Complex64>,
}

pub fn cmd_expand(lambda_value: f64, a2: f64, a3: f64, order: usize, fmt: OutputFormat) -> Result<Outcome, CliError> {
    let l = lambda(lambda_value)?;
    if order < 2 || order >= MAX_ORDER {
        return Err(CliError::Usage(format!(
            "expansion order must lie in 2..{MAX_ORDER}, got {order}"
        )));
    }
    let (a2c, a3c) = (Complex64::new(a2, 0.0), Complex64::new(a3, 0.0));
    let f = NormalizedFn::from_tail(&[a2c, a3c], order + 1)?;
    let lhs = lhs_series(&f, l, order)?;
    let ghs = ghs_series(&f, l, order)?;
    let lp = lhs_closed_form(a2c, a3c, l);
    let gp = ghs_closed_form(a2c, a3c, l);
    let rows: Vec<ExpandRow> = (0..=order)
        .map(|k| ExpandRow {
            k,
            lhs: lhs.coeff(k),
            ghs: ghs.coeff(k),
            lhs_predicted: (1..=2).contains(&k).then(|| lp[k - 1]),
            ghs_predicted: (1..=2).contains(&k).then(|| gp[k - 1]),
        })
        .collect();
    let pred = |p: Option<Complex64>| p.map(|v| sig10(v.re)).unwrap_or_else(|| "-".into());
    let diff = |v: Complex64, p: Option<Complex64>| {
        p.map(|p| sig10((v - p).norm())).unwrap_or_else(|| "-".into())
    };
    let text = match fmt {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => {
            let mut s = "k,lhs,lhs_predicted,lhs_diff,ghs,ghs_predicted,ghs_diff\n".to_string();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.k,
                    sig10(r.lhs.re),
                    pred(r.lhs_predicted),
                    diff(r.lhs, r.lhs_predicted),
                    sig10(r.ghs.re),
                    pred(r.ghs_predicted),
                    diff(r.ghs, r.ghs_predicted)
                );
            }
            s
        }
        OutputFormat::Table => {
            let mut s = format!(
                "{:>3}{:>18}{:>18}{:>12}{:>18}{:>18}{:>12}\n",
                "k", "z-side", "predicted", "diff", "w-side", "predicted", "diff"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>3}{:>18}{:>18}{:>12}{:>18}{:>18}{:>12}",
                    r.k,
                    sig10(r.lhs.re),
                    pred(r.lhs_predicted),
                    diff(r.lhs, r.lhs_predicted),
                    sig10(r.ghs.re),
                    pred(r.ghs_predicted),
                    diff(r.ghs, r.ghs_predicted)
                );
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}
