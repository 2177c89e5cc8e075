//! `plumbhf`: graded roots, d-invariants, tau pairs and the symplectic
//! obstruction for plumbed homology spheres.
//!
//! Exit codes: 0 success, 1 internal failure (oracle mismatch, box over the
//! cap), 2 invalid input, 3 not negative definite, 4 not almost-rational,
//! 5 tau sequence not stabilized at the cutoff.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "plumbhf",
    version,
    about = "Heegaard Floer invariants of negative-definite plumbings"
)]
pub struct Cli {
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timing (microseconds) in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Star-shaped plumbing graph of the Brieskorn sphere Sigma(a1, a2, a3).
    Brieskorn {
        a1: i64,
        a2: i64,
        a3: i64,
        /// Write the graph JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graded root of an almost-rational graph.
    Root {
        graph: PathBuf,
        /// Tau sequence cutoff; chosen automatically when omitted.
        cutoff: Option<usize>,
        /// Write a DOT drawing of the root.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Cross-check against the brute-force lattice enumeration.
        #[arg(long)]
        oracle: bool,
        /// Print only the d-invariant.
        #[arg(long)]
        d: bool,
        /// Write the canonical root JSON.
        #[arg(long)]
        root_json: Option<PathBuf>,
    },
    /// d-invariant of an almost-rational graph.
    D {
        graph: PathBuf,
        cutoff: Option<usize>,
    },
    /// Tau pair of a Legendrian surgery presentation.
    Tau { presentation: PathBuf },
    /// Cobordism-class obstruction to symplectic structures.
    Obstruct {
        graph: PathBuf,
        /// Tau set as "a,b", or "unknown".
        #[arg(long, conflicts_with = "presentation")]
        tau_set: Option<String>,
        /// Take the tau set from a surgery presentation.
        #[arg(long)]
        presentation: Option<PathBuf>,
        /// Upper bound on the slice genus of the knot.
        #[arg(long, default_value_t = 0)]
        g4: i64,
        /// Grading of the candidate classes.
        #[arg(long, default_value = "0")]
        grading: String,
        cutoff: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
