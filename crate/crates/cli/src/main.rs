//! `tsallis`: tables, reports and verification suites for the Tsallis
//! q-exponential calculus.
//!
//! Exit codes: 0 success, 1 check failure, 2 domain error, 3 I/O or parse
//! error.

mod commands;
mod config;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Mode, OutputFormat, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "tsallis", version, about = "Tsallis q-exponential calculus")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Deformation parameter: a decimal or a fraction `p/r`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,

    /// Truncation degree (at least 4) [default: 64].
    #[arg(long, global = true)]
    trunc: Option<usize>,

    /// Tolerance for float-mode checks [default: 1e-10].
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Arithmetic [default: float].
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    /// Seed for random instances [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format [default: json].
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON config file; flags take precedence over its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficient table: alpha_k, gamma_k, sign and ratio |gamma_{k+1}/gamma_k|.
    Coeffs {
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Kernel partial sum K_q(z, w) with radius and space class.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Realization file for the rational suite.
        #[arg(long)]
        realization: Option<PathBuf>,
    },
    /// q-Stirling triangle in the symbol λ.
    Stirling {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Substitute λ = λ(k; q).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Borel transform of a series file.
    Borel {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Direction::Forward)]
        direction: Direction,
    },
    /// Solve (M_z^* - λ) f = e_q(λz); λ = 1 is the Jordan chain equation.
    Jordan {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        f0: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Block Hankel matrix of a series file and its numerical rank.
    Hankel {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Relative singular value threshold.
        #[arg(long, default_value_t = 1e-8)]
        rank_tol: f64,
    },
    /// Taylor series of a realization, or a random minimal realization.
    Realize {
        /// Realization file; without it a random minimal one is drawn.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        state_dim: usize,
        #[arg(long, default_value_t = 1)]
        outputs: usize,
        #[arg(long, default_value_t = 1)]
        inputs: usize,
        #[arg(long, value_enum, default_value_t = Emit::Series)]
        emit: Emit,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Adjoints,
    Identities,
    Commutators,
    Eigen,
    Jordan,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Series,
    Realization,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let code = match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<bool, config::CliError> {
    let g = cli.global;
    let cfg = RunConfig::resolve(
        config::Flags {
            q: g.q,
            trunc: g.trunc,
            tol: g.tol,
            mode: g.mode,
            seed: g.seed,
            output: g.output,
            out: g.out,
        },
        g.config.as_deref(),
    )?;
    let (doc, pass) = match cfg.mode {
        Mode::Float => commands::dispatch::<f64>(&cfg, &cli.command)?,
        Mode::Exact => commands::dispatch::<tsallis::Rational>(&cfg, &cli.command)?,
    };
    output::emit(&cfg, &doc)?;
    Ok(pass)
}
