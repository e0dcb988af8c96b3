//! `netform`: stability checks, stable-graph censuses, parameter conditions,
//! formation ensembles and degree-sequence realization from the command line.
//!
//! Exit codes: 0 affirmative result, 1 negative verdict, 2 usage or parse error.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "netform", version, about = "Pairwise-stable network formation analyses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide pairwise stability of one graph.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Render rationals as 4-place decimals.
        #[arg(long)]
        decimal: bool,
        /// Also write the report and a manifest into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every pairwise-stable labeled graph.
    Enumerate {
        #[arg(long)]
        config: PathBuf,
        /// Node count; must match the config.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        decimal: bool,
    },
    /// Evaluate the parameter conditions of a Cournot game.
    Conditions {
        #[arg(long)]
        config: PathBuf,
        /// Graph at which to evaluate the per-graph quantity inequalities.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ConditionSet::All)]
        set: ConditionSet,
        #[arg(long)]
        decimal: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an ensemble of stochastic formation processes.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        /// Write each run's added-edge sequence.
        #[arg(long)]
        traces: bool,
    },
    /// Build a graph with the given degree sequence.
    Realize {
        /// Comma-separated degrees, e.g. `1,1,1,2,3`.
        sequence: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConditionSet {
    All,
    Nonneg,
    Complete,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dot,
}

/// Outcome of a command that ran to completion.
pub enum Verdict {
    Affirmative,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let result = match cli.command {
        Command::Check { config, graph, decimal, out } => {
            commands::check(&config, &graph, decimal, out.as_deref(), started)
        }
        Command::Enumerate { config, n, out, threads, decimal } => {
            commands::enumerate(&config, n, &out, threads, decimal, started)
        }
        Command::Conditions { config, graph, set, decimal, format, out } => {
            commands::conditions(&config, graph.as_deref(), set, decimal, format, out.as_deref(), started)
        }
        Command::Simulate { config, runs, seed, out, threads, traces } => {
            commands::simulate(&config, runs, seed, &out, threads, traces, started)
        }
        Command::Realize { sequence, format, out } => commands::realize(&sequence, format, out.as_deref(), started),
    };
    match result {
        Ok(Verdict::Affirmative) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
