//! `quivlip`: encode, double, compare and perturb representations of
//! bidirected graphs from the command line.
//!
//! Exit status is 0 on success, 1 when the answer is negative (not
//! isomorphic, nothing recoverable near the identity) and 2 on bad input.
//! Results go to stdout or `--out`; diagnostics go to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "quivlip",
    version,
    about = "Isomorphisms of bidirected-graph representations"
)]
pub struct Cli {
    /// Tolerance for accepting a result (each command has its own default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Direct,
    Pair,
    Doubled,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a quiver representation as a matrix pair with its block layout.
    Encode { rep: PathBuf },
    /// Double a representation into a quiver representation with involution.
    Double { rep: PathBuf },
    /// Decide whether two representations are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Recover an isomorphism B → A close to the identity.
    Recover {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        route: Option<RouteArg>,
    },
    /// Primary square root of a matrix.
    Sqrt {
        matrix: PathBuf,
        /// Rotate the branch cut by this angle instead of choosing one.
        #[arg(long)]
        theta: Option<f64>,
        /// Also emit the interpolating polynomial.
        #[arg(long)]
        poly: bool,
    },
    /// Estimate the local Lipschitz constant of a representation.
    Lipschitz {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, value_enum)]
        route: Option<RouteArg>,
    },
}

/// How a command ended when it did not fail.
pub enum Verdict {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Verdict::Positive) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
