//! `fullpop` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, I/O or format error, 2 no fully popular
//! matching, 3 a verification failed or a cross-check found differences.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fullpop::{PopularBackend, TriggerOrder};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NONE: u8 = 2;
pub const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fullpop", version, about = "Fully popular matchings in bipartite preference instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a maximum-size fully popular matching, or report that none exists.
    Solve(SolveArgs),
    /// Check a given matching for popularity, agent-popularity or both.
    Verify(VerifyArgs),
    /// List the valid, popular or legal edges of an instance.
    Edges(EdgesArgs),
    /// Exhaustive ground truth for small instances, optionally diffed against the solver.
    Oracle(OracleArgs),
    /// Print a seeded random instance.
    Generate(GenerateArgs),
    /// Time the solver on generated instances of growing size.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Fast,
    PerEdge,
    Oracle,
}

impl From<Backend> for PopularBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Fast => PopularBackend::Fast,
            Backend::PerEdge => PopularBackend::PerEdge,
            Backend::Oracle => PopularBackend::Oracle,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Trigger {
    #[default]
    Lowest,
    Discovery,
}

impl From<Trigger> for TriggerOrder {
    fn from(t: Trigger) -> Self {
        match t {
            Trigger::Lowest => TriggerOrder::LowestId,
            Trigger::Discovery => TriggerOrder::Discovery,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    Popular,
    APopular,
    #[default]
    Fully,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Kind {
    Valid,
    Popular,
    #[default]
    Legal,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance file, or `-` for standard input.
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Include the per-pass record of the forbidding loop.
    #[arg(long)]
    pub trace: bool,
    /// Write the mirror graph's ranked lists to standard error.
    #[arg(long)]
    pub dump_mirror: bool,
    #[arg(long, value_enum, default_value_t)]
    pub backend: Backend,
    #[arg(long, value_enum, default_value_t)]
    pub trigger: Trigger,
    /// Re-check the final state's structural invariants.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    /// Matching file: one `agent job` pair per line.
    #[arg(long)]
    pub matching: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EdgesArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t)]
    pub backend: Backend,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GenParams {
    #[arg(long, default_value_t = 4)]
    pub agents: usize,
    #[arg(long, default_value_t = 4)]
    pub jobs: usize,
    /// Probability that an agent-job pair is an edge, in (0, 1].
    #[arg(long, default_value_t = 0.6)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Instance file; omit with `--sweep`.
    #[arg(required_unless_present = "sweep")]
    pub instance: Option<PathBuf>,
    /// Diff the solver and the fast checks against the ground truth.
    #[arg(long)]
    pub cross_check: bool,
    /// Cross-check this many generated instances (seeds `seed`, `seed + 1`, ...) instead of a file.
    #[arg(long, conflicts_with = "instance")]
    pub sweep: Option<u64>,
    #[command(flatten)]
    pub gen: GenParams,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub gen: GenParams,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Smallest target edge count; each further size doubles it.
    #[arg(long, default_value_t = 1000)]
    pub min_edges: usize,
    /// Largest target edge count.
    #[arg(long, default_value_t = 128_000)]
    pub max_edges: usize,
    /// Average agent degree.
    #[arg(long, default_value_t = 5.0)]
    pub degree: f64,
    /// Timed runs per size; the median is reported.
    #[arg(long, default_value_t = 3)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Edges(a) => commands::edges(&a),
        Command::Oracle(a) => commands::oracle(&a),
        Command::Generate(a) => commands::generate(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
