//! `jnb`: check, solve and verify Jordan normal bases of finite lattices,
//! compute Jordan chains of nilpotent matrices over GF(p), and
//! cross-validate the two on subspace lattices.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails (a
//! condition is false, a map is not nilpotent, verification fails), 2 on
//! bad input or usage.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "jnb", version, about = "Jordan normal bases in finite lattices and over GF(p)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the three base-existence conditions on a lattice file.
    Check {
        file: PathBuf,
        /// Also write the Hasse diagram as DOT.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// Compute a Jordan normal base of a lattice file with a map.
    Solve {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Skip the condition checks; failures then surface during
        /// construction or verification.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// Verify a base file against a lattice file with a map.
    Verify { lattice: PathBuf, base: PathBuf },
    /// Compute and verify Jordan chains of a nilpotent matrix.
    Chains {
        matrix: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Block sizes of a nilpotent matrix from kernel dimensions of its powers.
    Oracle { matrix: PathBuf },
    /// Run both engines on subspace lattices and compare them.
    Crosscheck(CrosscheckArgs),
    /// Write a fixture file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    #[arg(long)]
    pub prime: u32,
    #[arg(long)]
    pub dim: usize,
    /// A single matrix file.
    #[arg(long, conflicts_with_all = ["exhaustive", "random"])]
    pub matrix: Option<PathBuf>,
    /// Every nilpotent matrix of the given size.
    #[arg(long, conflicts_with = "random")]
    pub exhaustive: bool,
    /// This many seeded random nilpotent matrices.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Boolean,
    Chain,
    SubspaceLattice,
    NilpotentMatrix,
    CanonicalBlocks,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Height of a chain lattice.
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long)]
    pub prime: Option<u32>,
    /// Block sizes, e.g. `2,1`.
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix whose induced map is attached to a subspace lattice.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Attach the zero map to a boolean lattice.
    #[arg(long)]
    pub zero_map: bool,
    /// Attach the one-step shift to a chain lattice.
    #[arg(long)]
    pub shift: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub emit_dot: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Math(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
