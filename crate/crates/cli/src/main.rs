//! `taumod`: origami enumeration, Lyapunov tables, Picard relations and
//! tau-function check suites.
//!
//! Exit codes: 0 pass, 2 usage or input error, 3 check failure (the report
//! is still written).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use taumod::tau_elliptic::Genus1Options;

use commands::{Genus2Args, InputError};
use output::Format;

const EXIT_INPUT: u8 = 2;
const EXIT_CHECK: u8 = 3;

#[derive(Parser)]
#[command(
    name = "taumod",
    version,
    about = "Moduli of holomorphic differentials: origamis, Lyapunov sums, Picard relations, tau functions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Numerical evaluation tolerance of the genus-2 tau pipeline
    /// (quadrature and theta truncation).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores). Reports do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Calibration constant K of the boundary Lyapunov estimator, as p/q.
    #[arg(long = "calibration-k", global = true, default_value = "12")]
    calibration_k: String,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate square-tiled surfaces with their orbits, cusps and cylinders.
    Origami {
        #[arg(long)]
        degree: usize,
        /// Comma-separated zero orders, e.g. "1,1"; "" for genus one.
        #[arg(long, allow_hyphen_values = true)]
        stratum: String,
    },
    /// Lyapunov-sum table over all orbits of degree up to dmax.
    Lyapunov {
        #[arg(long, allow_hyphen_values = true)]
        stratum: String,
        #[arg(long)]
        dmax: usize,
        /// Smallest degree (default: the minimal degree of the stratum).
        #[arg(long)]
        dmin: Option<usize>,
    },
    /// Formula for lambda and the divisor of the tau function.
    Picard {
        #[arg(long)]
        genus: u32,
        /// Run the exact identity checks.
        #[arg(long)]
        verify: bool,
    },
    /// Tau-function check suites.
    Tau {
        #[command(subcommand)]
        which: TauCommand,
    },
}

#[derive(Subcommand)]
enum TauCommand {
    /// Genus one: modular law, cusp asymptotics, Bergman connection.
    Genus1 {
        /// Comma-separated groups: modular, translation, cusp, connection, all.
        #[arg(long, conflicts_with = "all_checks")]
        checks: Option<String>,
        #[arg(long)]
        all_checks: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random samples of the modular law.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Genus two hyperelliptic curves with a generic differential.
    Genus2 {
        /// Curve JSON: {"branch_points": [[re,im],…], "c0": [re,im], "c1": [re,im]}.
        /// Without it a random corpus is used.
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Comma-separated groups: periods, riemann, prime, invariance,
        /// symplectic, ddeg, all.
        #[arg(long, conflicts_with = "all_checks")]
        checks: Option<String>,
        #[arg(long)]
        all_checks: bool,
        /// Seed of the random corpus.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Size of the random corpus.
        #[arg(long, default_value_t = 1)]
        corpus: usize,
    },
}

fn run(cli: Cli) -> Result<u8, InputError> {
    let g = &cli.global;
    if let Some(j) = g.jobs {
        if j == 0 {
            return Err(InputError("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()?;
    }
    let cal = commands::parse_calibration(&g.calibration_k)?;
    let outcome = match &cli.command {
        Command::Origami { degree, stratum } => commands::origami(*degree, stratum)?,
        Command::Lyapunov {
            stratum,
            dmax,
            dmin,
        } => commands::lyapunov(stratum, *dmin, *dmax, cal)?,
        Command::Picard { genus, verify } => commands::picard(*genus, *verify)?,
        Command::Tau { which } => match which {
            TauCommand::Genus1 {
                checks,
                all_checks,
                seed,
                samples,
            } => {
                let opts = Genus1Options {
                    seed: *seed,
                    modular_samples: *samples,
                    ..Genus1Options::default()
                };
                commands::tau_genus1(checks.as_deref(), *all_checks, opts)?
            }
            TauCommand::Genus2 {
                curve,
                checks,
                all_checks,
                seed,
                corpus,
            } => commands::tau_genus2(Genus2Args {
                curve: curve.as_deref(),
                checks: checks.as_deref(),
                all: *all_checks,
                seed: *seed,
                corpus: *corpus,
                tol: g.tol,
            })?,
        },
    };
    output::write(outcome.report.as_ref(), g.format, g.out.as_deref())
        .map_err(|e| InputError(format!("cannot write report: {e}")))?;
    Ok(if outcome.passed { 0 } else { EXIT_CHECK })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version go to stdout with status 0, usage errors to stderr with 2
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => {
            if code == EXIT_CHECK {
                eprintln!("taumod: one or more checks failed");
            }
            ExitCode::from(code)
        }
        Err(InputError(msg)) => {
            eprintln!("taumod: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
