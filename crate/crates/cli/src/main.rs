//! `aftsynth`: analyze, export, cross-check, and simulate attack-fault trees
//! given in the extended Galileo format.
//!
//! Exit codes are a stable contract: 0 success with a result, 1 input error,
//! 2 internal error, 3 empty or negative result (no disjuncts, check
//! mismatch, unreachable target).

mod analyze;
mod check;
mod export;
mod load;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::load::Failure;

#[derive(Parser)]
#[command(name = "aftsynth", version, about = "Parameter synthesis for attack-fault trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize all parameter valuations under which the root can be
    /// disrupted (or can fail, with `--target fail`).
    Analyze(AnalyzeArgs),
    /// Write the translated automata network in the external model
    /// checker's textual format.
    Export(ExportArgs),
    /// Cross-validate the synthesized constraints against an independent
    /// engine: a bottom-up scenario oracle for concrete trees, the concrete
    /// simulator over a parameter grid otherwise.
    Check(CheckArgs),
    /// Run the network under one fixed valuation and print a witness trace.
    Simulate(SimulateArgs),
}

/// Which outcome of the root node to reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Success,
    Fail,
}

impl Target {
    fn as_str(self) -> &'static str {
        match self {
            Target::Success => "success",
            Target::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input tree in the extended Galileo format.
    file: PathBuf,
    /// Root outcome to synthesize valuations for.
    #[arg(long, value_enum, default_value_t = Target::Success)]
    target: Target,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for frontier expansion (0 = one per core).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Keep symbolic states whose constraints are included in already
    /// visited ones instead of pruning them.
    #[arg(long)]
    no_subsumption: bool,
}

#[derive(Args)]
struct ExportArgs {
    /// Input tree in the extended Galileo format.
    file: PathBuf,
    /// Write the model here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Input tree; omit when using `--random`.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    file: Option<PathBuf>,
    /// Parameter grid, e.g. `tMax_Break=0..12step3,CostFindLAN_AP=0..40step20`.
    /// Required for parametric trees; each axis is `name=lo..histepS` or a
    /// single `name=value`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for frontier expansion (0 = one per core).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Step budget per simulation run.
    #[arg(long, default_value_t = 100_000)]
    steps: usize,
    /// Cross-check this many freshly generated random concrete trees
    /// instead of a file.
    #[arg(long, value_name = "N")]
    random: Option<u32>,
    /// Seed for `--random` tree generation.
    #[arg(long, default_value_t = 0, requires = "random")]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Input tree in the extended Galileo format.
    file: PathBuf,
    /// Parameter assignment `NAME=VALUE`; repeat until every parameter is
    /// set, including total_time, total_cost, and total_damage.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
    /// Root outcome to search for.
    #[arg(long, value_enum, default_value_t = Target::Success)]
    target: Target,
    /// Step budget for the reachability search.
    #[arg(long, default_value_t = 100_000)]
    steps: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("AFTSYNTH_LOG", "warn"))
        .init();
    let outcome: Result<u8, Failure> = match &cli.command {
        Command::Analyze(args) => analyze::run(args),
        Command::Export(args) => export::run(args),
        Command::Check(args) => check::run(args),
        Command::Simulate(args) => simulate::run(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{}", failure.rendered);
            ExitCode::from(failure.code)
        }
    }
}
