//! `tvpriv`: solve, sweep, measure and verify utility-privacy trade-offs
//! from JSON source files.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 invalid input,
//! 3 internal solver error.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tvpriv::probability::Mechanism;
use tvpriv::tradeoff::UtilityKind;
use tvpriv::verify::{Suite, DEFAULT_SEED};
use tvpriv::Strategy;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    SuiteFailed,
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::SuiteFailed => 1,
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<tvpriv::Error> for CliError {
    fn from(e: tvpriv::Error) -> Self {
        use tvpriv::Error::*;
        match e {
            DegenerateSystem | Infeasible | Unbounded | IterationLimit | EmptySupport => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tvpriv",
    version,
    about = "Optimal utility-privacy trade-offs under average total variation leakage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal utility and mechanism at one leakage budget.
    Solve {
        source: PathBuf,
        /// mi, mmse or perr
        #[arg(long)]
        utility: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trade-off curve on an even budget grid over [0, T(X;Y)], as CSV.
    Curve {
        source: PathBuf,
        #[arg(long)]
        utility: String,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every leakage measure of a mechanism applied to a source.
    Measure {
        source: PathBuf,
        #[command(flatten)]
        mechanism: MechanismArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sign-pattern regions and their extreme points.
    Regions {
        source: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inference gain of a Bayes-optimal attacker observing the release.
    Threat {
        source: PathBuf,
        #[command(flatten)]
        mechanism: MechanismArg,
        /// brier or log_loss
        #[arg(long, default_value = "brier")]
        cost: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized invariant suites.
    Verify {
        /// bounds, markov, threats, lp or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run instances on one thread.
        #[arg(long)]
        sequential: bool,
        /// Also write the reports as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MechanismArg {
    /// Mechanism JSON, or the output of `solve`.
    #[arg(long)]
    mechanism: Option<PathBuf>,
    /// Release Y itself.
    #[arg(long)]
    identity: bool,
}

impl MechanismArg {
    fn load(&self, y_size: usize) -> Result<Mechanism, CliError> {
        match &self.mechanism {
            Some(path) => io::load_mechanism(path),
            None => Ok(Mechanism::identity(y_size)),
        }
    }
}

fn utility(s: &str) -> Result<UtilityKind, CliError> {
    s.parse().map_err(|_| {
        CliError::Validation(format!(
            "--utility: unknown utility '{s}', expected mi, mmse or perr"
        ))
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            source,
            utility: u,
            epsilon,
            out,
        } => {
            let kind = utility(&u)?;
            let (name, src) = io::load_source(&source)?;
            let v = commands::solve(&src, name.as_deref(), kind, epsilon)?;
            io::emit(out.as_deref(), &io::json_text(&v))
        }
        Command::Curve {
            source,
            utility: u,
            grid,
            out,
        } => {
            let kind = utility(&u)?;
            if grid < 2 {
                return Err(CliError::Validation(format!(
                    "--grid: need at least 2 points, got {grid}"
                )));
            }
            let (_, src) = io::load_source(&source)?;
            io::emit(out.as_deref(), &commands::curve(&src, kind, grid)?)
        }
        Command::Measure {
            source,
            mechanism,
            out,
        } => {
            let (_, src) = io::load_source(&source)?;
            let mech = mechanism.load(src.y_size())?;
            let v = commands::measure(&src, &mech)?;
            io::emit(out.as_deref(), &io::json_text(&v))
        }
        Command::Regions { source, out } => {
            let (_, src) = io::load_source(&source)?;
            let v = commands::regions(&src)?;
            io::emit(out.as_deref(), &io::json_text(&v))
        }
        Command::Threat {
            source,
            mechanism,
            cost,
            out,
        } => {
            let (_, src) = io::load_source(&source)?;
            let mech = mechanism.load(src.y_size())?;
            let v = commands::threat(&src, &mech, &cost)?;
            io::emit(out.as_deref(), &io::json_text(&v))
        }
        Command::Verify {
            suite,
            instances,
            seed,
            sequential,
            out,
        } => {
            let suites = Suite::selection(&suite)
                .map_err(|_| CliError::Validation(format!("--suite: unknown suite '{suite}'")))?;
            let strategy = if sequential {
                Strategy::Sequential
            } else {
                Strategy::default()
            };
            let (reports, text) = commands::verify(&suites, instances, seed, strategy)?;
            io::emit(None, &text)?;
            if let Some(path) = out {
                io::emit(
                    Some(&path),
                    &io::json_text(&commands::verify_json(&reports)),
                )?;
            }
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(CliError::SuiteFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Validation(msg) => eprintln!("error: {msg}"),
                CliError::Internal(msg) => eprintln!("internal error: {msg}"),
                CliError::SuiteFailed => eprintln!("verification failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
