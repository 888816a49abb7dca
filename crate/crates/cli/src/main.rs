//! `jetcascade`: reproducible experiments with truncated jet groups.
//!
//! Every run writes JSON lines: a header with the tool version and the full
//! resolved configuration, then the records of the experiment. Exit codes:
//! 0 success, 2 invalid input or parameters, 3 resource limit, 4 internal.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::cascade::{CascadeArgs, CascadeParams};
use commands::free_words::{FreeWordsArgs, FreeWordsParams};
use commands::linear::{LinearArgs, LinearParams};
use commands::orbit::{HuntArgs, HuntParams, ScanArgs, ScanParams};
use commands::zassenhaus::{ZassenhausArgs, ZassenhausParams};
use config::{drive, Globals};
use report::Failure;

#[derive(Parser, Debug)]
#[command(name = "jetcascade", version, about = "Commutator cascades, jet groups and orbit experiments")]
struct Cli {
    /// JSON config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Size of the worker pool.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report file (JSON lines); standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Validate and print the resolved plan without computing.
    #[arg(long, global = true)]
    dry_run: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the commutator cascade of a set of jets and probe its collapse.
    Cascade(CascadeArgs),
    /// Check cascade entries against the norm schedule.
    ZassenhausVerify(ZassenhausArgs),
    /// Analyze a finitely generated matrix group.
    LinearAnalyze(LinearArgs),
    /// Search a grid for points moved slightly by cascade words.
    OrbitScan(ScanArgs),
    /// Accumulate returns on the stable manifold of a hyperbolic map.
    StableHunt(HuntArgs),
    /// Print the α-words of the free-group recursion.
    FreeWords(FreeWordsArgs),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let globals = Globals {
        config: cli.config,
        seed: cli.seed,
        threads: cli.threads,
        out: cli.out,
        dry_run: cli.dry_run,
    };
    match cli.command {
        Command::Cascade(a) => drive::<CascadeParams>(&globals, |p| a.apply(p)),
        Command::ZassenhausVerify(a) => drive::<ZassenhausParams>(&globals, |p| a.apply(p)),
        Command::LinearAnalyze(a) => drive::<LinearParams>(&globals, |p| a.apply(p)),
        Command::OrbitScan(a) => drive::<ScanParams>(&globals, |p| a.apply(p)),
        Command::StableHunt(a) => drive::<HuntParams>(&globals, |p| a.apply(p)),
        Command::FreeWords(a) => drive::<FreeWordsParams>(&globals, |p| a.apply(p)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(failure)) => {
            for m in failure.messages() {
                eprintln!("error: {m}");
            }
            ExitCode::from(failure.exit_code())
        }
        Err(_) => ExitCode::from(4),
    }
}
