use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rklgof::cli::{
    self, cache_from_env, cmd_coeffs, cmd_critvals, cmd_entropy, cmd_power, cmd_test,
    human_summary, CritvalsRequest, PowerRequest, StatChoice, TestRequest, WindowArg,
};
use rklgof::error::Error;
use rklgof::mc::McConfig;

/// Goodness-of-fit tests for exponentiality under progressive Type-II
/// censoring, with Monte Carlo critical values and power studies.
#[derive(Parser)]
#[command(name = "rklgof", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the test on a data file (JSON report to stdout, summary to stderr).
    Test {
        /// CSV data file: one observation per line, optional header `x`.
        #[arg(long)]
        data: PathBuf,
        /// Scheme literal, e.g. "n=19 m=8 R=0,0,3,0,3,0,0,5".
        #[arg(long)]
        scheme: Option<String>,
        /// File containing the scheme literal.
        #[arg(long)]
        scheme_file: Option<PathBuf>,
        /// Rényi order.
        #[arg(long, default_value_t = 0.4)]
        alpha: f64,
        /// Window size, or `auto` to minimize the simulated critical value.
        #[arg(long, default_value = "auto")]
        w: WindowArg,
        /// Significance levels for critical values (comma-separated).
        #[arg(long, value_delimiter = ',', default_value = "0.10")]
        levels: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "renyi")]
        stat: StatChoice,
    },
    /// Simulate critical-value tables for a scheme.
    Critvals {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 0.4)]
        alpha: f64,
        #[arg(long, default_value = "auto")]
        w: WindowArg,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.10")]
        levels: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "renyi")]
        stat: StatChoice,
    },
    /// Power study: a whole table (--table 1|2|3) or one explicit cell.
    Power {
        /// Reproduce the full study grid for sample size 10, 20 or 30.
        #[arg(long, conflicts_with_all = ["scheme", "alt"])]
        table: Option<u8>,
        #[arg(long, requires = "alt")]
        scheme: Option<String>,
        /// Alternative distribution literal, e.g. weibull:2.
        #[arg(long, requires = "scheme")]
        alt: Option<String>,
        #[arg(long, value_enum, default_value = "both")]
        stat: StatChoice,
        #[arg(long, default_value_t = 0.4)]
        alpha: f64,
        #[arg(long, default_value = "auto")]
        w: WindowArg,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        /// Mandatory: power runs must be reproducible.
        #[arg(long, required = true)]
        seed: u64,
        #[arg(long, default_value_t = 0.10)]
        level: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Dump scheme coefficients (gamma, c, log_c, p, a) as JSON.
    Coeffs {
        #[arg(long)]
        scheme: String,
    },
    /// Debug: per-term entropy estimator diagnostics as JSON.
    Entropy {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        scheme_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0.4)]
        alpha: f64,
        #[arg(long)]
        w: usize,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Test { data, scheme, scheme_file, alpha, w, levels, reps, seed, workers, stat } => {
            let scheme =
                cli::resolve_scheme(scheme.as_deref(), scheme_file.as_deref(), Some(&data))?;
            let req = TestRequest {
                data_path: data,
                scheme,
                alpha,
                w,
                levels,
                stat,
                cfg: McConfig { reps, seed, level: 0.10, workers },
            };
            let report = cmd_test(&req, cache_from_env()?.as_ref())?;
            eprint!("{}", human_summary(&report));
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Critvals { scheme, alpha, w, levels, reps, seed, workers, stat } => {
            let req = CritvalsRequest {
                scheme: scheme.parse()?,
                alpha,
                w,
                levels,
                stat,
                cfg: McConfig { reps, seed, level: 0.10, workers },
            };
            let report = cmd_critvals(&req, cache_from_env()?.as_ref())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Power { table, scheme, alt, stat, alpha, w, reps, seed, level, workers } => {
            let req = match (table, scheme, alt) {
                (Some(t), _, _) => PowerRequest::Table { table: t, alpha },
                (None, Some(s), Some(a)) => PowerRequest::Cell {
                    scheme: s.parse()?,
                    alternative: a.parse()?,
                    stat,
                    alpha,
                    w,
                },
                _ => {
                    return Err(Error::InvalidParameter(
                        "power needs either --table N or both --scheme and --alt".into(),
                    ))
                }
            };
            let cfg = McConfig { reps, seed, level, workers };
            let csv = cmd_power(&req, &cfg, cache_from_env()?.as_ref())?;
            print!("{csv}");
            Ok(())
        }
        Command::Coeffs { scheme } => {
            let report = cmd_coeffs(&scheme.parse()?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Entropy { data, scheme, scheme_file, alpha, w } => {
            let scheme =
                cli::resolve_scheme(scheme.as_deref(), scheme_file.as_deref(), Some(&data))?;
            let report = cmd_entropy(&data, &scheme, alpha, w)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
