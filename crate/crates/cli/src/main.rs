//! `slepian`: tables of running-maximum distributions and oracle validation.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 usage or domain error,
//! 3 numerical or resource failure.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use slepian_core::dist::{joint_cdf, running_max_cdf, running_max_pdf, JointQuery, MarginalQuery};
use slepian_core::moments::{mean, second_moment, second_moment_uncorrected, variance};
use slepian_core::montecarlo::{MaxSampling, McSpec};
use slepian_core::quadrature::QuadratureSpec;
use slepian_core::special::std_normal_pdf;
use slepian_core::validation::{self, Scope, ValidationConfig};
use slepian_core::Error;

mod output;
mod range;

use output::{Format, Table};
use range::RangeSpec;

const THREADS_ENV: &str = "SLEPIAN_MAX_THREADS";

#[derive(Parser)]
#[command(name = "slepian", version, about = "Running maxima of the Slepian process S(t) = B(t+1) - B(t)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// P(m_s ≤ m) over a grid of levels.
    Cdf {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        /// Levels as lo:hi:steps.
        #[arg(long, allow_hyphen_values = true)]
        m: RangeSpec,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Density of m_s over a grid of levels.
    Pdf {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        m: RangeSpec,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// P(m_s ≤ m, M_t ≤ M).
    Joint {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long = "M", allow_negative_numbers = true)]
        big_m: f64,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Mean, second moment and variance of m_s over a grid of horizons.
    Moments {
        #[arg(long, allow_hyphen_values = true)]
        s: RangeSpec,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare analytic values with the path simulator.
    Validate {
        #[arg(long, default_value_t = 1_000_000)]
        paths: usize,
        #[arg(long, default_value_t = 1e-4)]
        grid_step: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Bridges per parameter point in the bridge group.
        #[arg(long, default_value_t = 100_000)]
        bridges: usize,
        #[arg(long, value_enum, default_value_t = SamplingArg::Exact)]
        sampling: SamplingArg,
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        /// `text` prints an aligned table; csv/json print one record per check.
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplingArg {
    /// Maximum over grid points only.
    Grid,
    /// Also sample the maximum inside each grid interval.
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Marginal,
    Joint,
    Moments,
    Bridge,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Validation,
}

impl Failure {
    fn at(context: String) -> impl FnOnce(Error) -> Failure {
        move |e| {
            let msg = format!("{context}: {e}");
            match e {
                Error::Domain(_) | Error::EmptyInput => Failure::Usage(msg),
                _ => Failure::Numerical(msg),
            }
        }
    }
}

fn worker_count(requested: Option<usize>) -> Result<usize, Failure> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Some(n),
            _ => return Err(Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => None,
    };
    let wanted = requested.unwrap_or(available);
    if wanted == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    Ok(cap.map_or(wanted, |c| wanted.min(c)))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let quad = QuadratureSpec::default();
    match cli.command {
        Command::Cdf { s, m, format } => {
            let mut table = Table::new(&["s", "m", "analytic"]);
            for level in m.points().map_err(Failure::Usage)? {
                let q = MarginalQuery::new(level, s).map_err(Failure::at(format!("s={s}")))?;
                let v = running_max_cdf(q, &quad).map_err(Failure::at(format!("cdf at s={s}, m={level}")))?;
                table.push(vec![s.into(), level.into(), v.into()]);
            }
            table.write(out, format)
        }
        Command::Pdf { s, m, format } => {
            let mut table = Table::new(&["s", "m", "analytic"]);
            for level in m.points().map_err(Failure::Usage)? {
                let q = MarginalQuery::new(level, s).map_err(Failure::at(format!("s={s}")))?;
                // m_0 = S(0) is standard normal
                let v = if s == 0.0 {
                    std_normal_pdf(level)
                } else {
                    running_max_pdf(q).map_err(Failure::at(format!("pdf at s={s}, m={level}")))?
                };
                table.push(vec![s.into(), level.into(), v.into()]);
            }
            table.write(out, format)
        }
        Command::Joint { m, big_m, s, t, format } => {
            let context = format!("joint at m={m}, M={big_m}, s={s}, t={t}");
            let q = JointQuery::new(m, big_m, s, t).map_err(Failure::at(context.clone()))?;
            let v = joint_cdf(q, &quad).map_err(Failure::at(context))?;
            let mut table = Table::new(&["m", "M", "s", "t", "analytic"]);
            table.push(vec![m.into(), big_m.into(), s.into(), t.into(), v.into()]);
            table.write(out, format)
        }
        Command::Moments { s, format } => {
            let mut table =
                Table::new(&["s", "mean", "second_moment_corrected", "second_moment_uncorrected", "variance"]);
            for h in s.points().map_err(Failure::Usage)? {
                let at = || Failure::at(format!("moments at s={h}"));
                table.push(vec![
                    h.into(),
                    mean(h).map_err(at())?.into(),
                    second_moment(h).map_err(at())?.into(),
                    second_moment_uncorrected(h).map_err(at())?.into(),
                    variance(h).map_err(at())?.into(),
                ]);
            }
            table.write(out, format)
        }
        Command::Validate { paths, grid_step, seed, workers, bridges, sampling, scope, format } => {
            let mc = McSpec {
                paths,
                grid_step,
                master_seed: seed,
                workers: worker_count(workers)?,
                sampling: match sampling {
                    SamplingArg::Grid => MaxSampling::Grid,
                    SamplingArg::Exact => MaxSampling::BridgeExact,
                },
                ..McSpec::default()
            };
            let scope = match scope {
                ScopeArg::Marginal => Scope::Marginal,
                ScopeArg::Joint => Scope::Joint,
                ScopeArg::Moments => Scope::Moments,
                ScopeArg::Bridge => Scope::Bridge,
                ScopeArg::All => Scope::All,
            };
            let config = ValidationConfig { mc, quad, bridges };
            let report = validation::run(scope, &config).map_err(Failure::at("validate".into()))?;
            match format {
                ReportFormat::Text => out.write_all(report.render().as_bytes()).map_err(io_failure)?,
                ReportFormat::Csv | ReportFormat::Json => {
                    let mut table = Table::new(&[
                        "group", "check", "analytic", "oracle", "std_error", "abs_diff", "tolerance", "status",
                    ]);
                    for c in &report.checks {
                        table.push(vec![
                            c.group.into(),
                            c.label.as_str().into(),
                            c.analytic.into(),
                            c.reference.into(),
                            c.std_error.into(),
                            c.abs_diff.into(),
                            c.tolerance.into(),
                            c.status.label().into(),
                        ]);
                    }
                    let f = if matches!(format, ReportFormat::Csv) { Format::Csv } else { Format::Json };
                    table.write(out, f)?;
                }
            }
            for c in report.failures() {
                eprintln!("failed: {} {} (diff {:e} > tol {:e})", c.group, c.label, c.abs_diff, c.tolerance);
            }
            if report.all_ok() {
                Ok(())
            } else {
                Err(Failure::Validation)
            }
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Numerical(format!("cannot write output: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => {
            eprintln!("error: cannot write output");
            ExitCode::from(3)
        }
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
