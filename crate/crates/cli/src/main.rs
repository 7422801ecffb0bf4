//! `ksparity`: build ray systems, count and list parity proofs, and decide
//! incidence structures from the command line.
//!
//! Every command prints a JSON report (or a short table with
//! `--format table`). Exit codes: 0 success, 1 internal invariant violation,
//! 2 input error, 3 budget exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ksparity::{Budget, Error};

#[derive(Parser, Debug)]
#[command(name = "ksparity", version, about = "Exact parity proofs of the Kochen-Specker theorem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Memory budget in MB.
    #[arg(long, global = true, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(1..))]
    budget_mem: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_time: Option<u64>,
    /// Largest log2 of a space enumerated exhaustively.
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..=64))]
    budget_enum: u32,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Ray,
    GeneralFull,
    GeneralBasis,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SystemName {
    #[value(name = "600cell")]
    Cell600,
    #[value(name = "60-105")]
    Pauli60_105,
    E8,
    Mermin,
}

/// Where the constraints come from.
#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["system", "rays", "structure"])))]
struct Source {
    #[arg(long, value_enum)]
    system: Option<SystemName>,
    /// Ray file: one vector per line, `#` comments.
    #[arg(long)]
    rays: Option<PathBuf>,
    /// Constraint-system JSON.
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Dimension of the ray file (default: length of the first vector).
    #[arg(long, requires = "rays")]
    dimension: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Ray)]
    mode: Mode,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("rays_source").required(true).args(["system", "rays"])))]
struct RaySource {
    #[arg(long, value_enum)]
    system: Option<SystemName>,
    #[arg(long)]
    rays: Option<PathBuf>,
    #[arg(long, requires = "rays")]
    dimension: Option<usize>,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("incidence_source").required(true).args(["cubic", "graph6", "structure"])))]
struct IncidenceSource {
    /// All connected cubic graphs on this many vertices.
    #[arg(long)]
    cubic: Option<usize>,
    #[arg(long)]
    graph6: Option<PathBuf>,
    /// Incidence-structure JSON `{"points": n, "blocks": [[..]]}`.
    #[arg(long)]
    structure: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orthogonal bases of a ray system.
    Bases {
        #[command(flatten)]
        source: RaySource,
        /// Include the basis lists in the report.
        #[arg(long)]
        list: bool,
    },
    /// Number of parity proofs: `2^k` or none.
    Count {
        #[command(flatten)]
        source: Source,
    },
    /// Proof sizes, counted through the dual code.
    Distribution {
        #[command(flatten)]
        source: Source,
    },
    /// Every proof with at most `--max-size` constraints.
    Minproofs {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_size: usize,
        /// Include the proofs themselves.
        #[arg(long)]
        list: bool,
    },
    /// Decide whether incidence structures admit parity proofs.
    Incidence {
        #[command(flatten)]
        source: IncidenceSource,
        /// Qubits for the Pauli search.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=8))]
        qubits: u64,
        #[arg(long, default_value_t = 50_000)]
        max_rules: usize,
        #[arg(long, default_value_t = 64)]
        max_length: usize,
        #[arg(long, default_value_t = 50_000_000)]
        max_nodes: u64,
    },
    /// Uniformly random proofs.
    Sample {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// List proofs in Gray-code order.
    Enumerate {
        #[command(flatten)]
        source: Source,
        /// Stop after this many proofs.
        #[arg(long)]
        limit: Option<u64>,
    },
}

fn budget(g: &Global) -> Budget {
    let b = Budget::default().with_memory_mb(g.budget_mem).with_enumeration_log2(g.budget_enum);
    match g.budget_time {
        Some(s) => b.with_time_limit(Duration::from_secs(s)),
        None => b,
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::InvalidDistribution(_) => 1,
        Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli.command, &cli.global) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::BudgetExceeded(_)) && matches!(cli.command, Command::Distribution { .. }) {
                eprintln!(
                    "hint: raise --budget-enum, or use `ksparity minproofs --max-size W` for the smallest proofs"
                );
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
