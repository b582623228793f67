use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

/// Batch analysis of orthomodular lattices given as Greechie diagrams.
#[derive(Debug, Parser)]
#[command(name = "omlkit", version)]
pub struct Cli {
    /// Emit one JSON object per lattice instead of text lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for lattice batches (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Diagram file: one diagram per line, `#` comments.
    pub path: PathBuf,
    /// Skip malformed lines with a warning instead of failing.
    #[arg(long)]
    pub lenient: bool,
    /// Skip exhaustive law verification when building lattices.
    #[arg(long)]
    pub no_verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and build each lattice, reporting its size.
    Parse {
        #[command(flatten)]
        input: Input,
    },
    /// Check an equation exhaustively on each lattice.
    Check {
        #[command(flatten)]
        input: Input,
        /// Equation text.
        #[arg(long, conflicts_with = "eq_file", required_unless_present = "eq_file")]
        eq: Option<String>,
        /// File holding the equation on its first non-comment line.
        #[arg(long)]
        eq_file: Option<PathBuf>,
        /// Refuse equations with more variables than this.
        #[arg(long, default_value_t = omlkit_core::eqn::DEFAULT_VAR_CAP)]
        var_cap: usize,
    },
    /// Find the first failing n-Go equation, or prove that all hold.
    Ngo {
        #[command(flatten)]
        input: Input,
        /// Largest n to try.
        #[arg(long, default_value_t = omlkit_core::godp::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Decide whether each lattice admits a strong set of states.
    States {
        #[command(flatten)]
        input: Input,
        /// Report every refuting pair, not just the first.
        #[arg(long)]
        all_pairs: bool,
    },
    /// Print the linear program for one pair of elements.
    LpDump {
        #[command(flatten)]
        input: Input,
        /// Pair `X,Y`, e.g. `a1,a7'` or `1,7'`.
        #[arg(long)]
        pair: String,
    },
    /// Generate an MGE that fails on each lattice lacking strong states.
    Mge {
        #[command(flatten)]
        input: Input,
        /// Shuffle the block relaxation order with this seed.
        #[arg(long, value_name = "SEED")]
        seed_order: Option<u64>,
        /// Use this pair instead of the first refuting one.
        #[arg(long)]
        pair: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("omlkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
