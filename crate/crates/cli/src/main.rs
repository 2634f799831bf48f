//! `fixcomp`: ground, transform, solve, verify and diagnose normal logic
//! programs.
//!
//! Exit codes: 0 ok, 1 check failure, 2 unreadable or malformed input,
//! 3 cap exceeded, 4 precondition violation.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fixcomp_core::semantics::{Check, Route, DEFAULT_EXHAUSTIVE_CAP};
use fixcomp_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "fixcomp",
    version,
    about = "Fixpoint completion and semantics of normal logic programs"
)]
struct Cli {
    /// Term depth bound for grounding programs with function symbols.
    #[arg(long, global = true, default_value_t = 0)]
    bound: usize,
    /// Largest Herbrand base enumerated exhaustively.
    #[arg(long, global = true, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    cap: usize,
    /// Emit flat JSON records, one per line.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the ground program.
    Ground { file: PathBuf },
    /// Print the fixpoint completion and the number of unfolding steps.
    Fixcomp {
        file: PathBuf,
        /// Drop clauses whose negative body contains another clause's.
        #[arg(long)]
        subsume: bool,
        /// Print the Clark completion of the result instead.
        #[arg(long)]
        clark: bool,
    },
    /// List stable or supported models, one per line.
    Models {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Brute)]
        route: RouteArg,
        #[arg(long, value_enum, default_value_t = Kind::Stable)]
        kind: Kind,
    },
    /// Run property checks on a file or a generated corpus.
    Verify(VerifyArgs),
    /// Metric and topological diagnostics.
    Diagnose {
        #[command(subcommand)]
        what: Diagnose,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RouteArg {
    Brute,
    Fixcomp,
    Completion,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Brute => Route::BruteForce,
            RouteArg::Fixcomp => Route::Fixcomp,
            RouteArg::Completion => Route::Completion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Stable,
    Supported,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Program file; omit when `--corpus` is given.
    #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
    file: Option<PathBuf>,
    /// Check to run; repeat for several, or `all`.
    #[arg(long = "check", required = true, value_parser = parse_checks)]
    checks: Vec<Vec<Check>>,
    /// Random corpus `n_atoms,n_clauses,max_body,neg_prob[,stratified]`.
    #[arg(long, requires = "seed")]
    corpus: Option<String>,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_checks(s: &str) -> Result<Vec<Check>, String> {
    if s == "all" {
        return Ok(Check::ALL.to_vec());
    }
    s.parse::<Check>()
        .map(|c| vec![c])
        .map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Diagnose {
    /// Find a local stratification or a cycle through negation.
    Stratify { file: PathBuf },
    /// Check that the GL operator strictly contracts a level metric.
    Contract {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MetricArg::Dl)]
        metric: MetricArg,
        /// Level mapping; defaults to `stratify` for dl and `fitting` for rho.
        #[arg(long, value_enum)]
        levels: Option<LevelsArg>,
        /// Check this many random pairs instead of all of them.
        #[arg(long, requires = "seed")]
        pairs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Search a finite witness that GL(I) keeps an atom false near I.
    Continuity {
        file: PathBuf,
        /// Interpretation as comma-separated atoms, `empty` or `full`.
        #[arg(long)]
        interp: String,
        #[arg(long)]
        atom: String,
        /// Largest witness set tried; defaults to the base size.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Iterate the GL operator and report how the sequence ends.
    Iterate {
        file: PathBuf,
        #[arg(long, default_value = "empty")]
        from: String,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Map an interpretation into the Cantor set, or decode a point.
    Embed {
        file: PathBuf,
        #[arg(long, required_unless_present = "decode", conflicts_with = "decode")]
        interp: Option<String>,
        /// Exact fraction `n/d` to decode.
        #[arg(long)]
        decode: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Dl,
    Rho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelsArg {
    Stratify,
    Fitting,
    Enumeration,
}

/// A command outcome that is not plain success.
#[derive(Debug)]
enum Failure {
    ChecksFailed,
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::ChecksFailed => 1,
            Failure::Input(_) => 2,
            Failure::Core(e) => match e {
                Error::Syntax { .. } | Error::ArityConflict { .. } => 2,
                Error::GroundingTooLarge { .. }
                | Error::IterationCap { .. }
                | Error::CapExceeded { .. } => 3,
                Error::NotTotal { .. } | Error::Precondition(_) | Error::Decode(_) => 4,
            },
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = commands::run(&cli);
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err((text, failure)) => {
            print!("{text}");
            match &failure {
                Failure::ChecksFailed => {}
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Core(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
