use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "contour-duo",
    version,
    about = "Two-contour cluster system: simulate, analyse, verify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the trajectory from an initial state.
    Simulate(SimulateArgs),
    /// Find the limit cycle reached from an initial state.
    Cycle(CycleArgs),
    /// Print the closed-form regime prediction.
    Classify(ParamArgs),
    /// Emit the velocity-mode diagram over all (l1, l2).
    Diagram(DiagramArgs),
    /// Compare simulation with prediction over a range of ring sizes.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Ascii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramSource {
    Theory,
    Simulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatesArg {
    All,
    Canonical,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub l1: usize,
    #[arg(long)]
    pub l2: usize,
}

#[derive(Debug, Clone, Args)]
pub struct StartArgs {
    /// Defaults to n-1.
    #[arg(long)]
    pub x1: Option<usize>,
    /// Defaults to d-1.
    #[arg(long)]
    pub x2: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub start: StartArgs,
    /// Number of steps; defaults to n*n.
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CycleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiagramArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "theory")]
    pub source: DiagramSource,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub states: StatesArg,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Exit with status 3 when any discrepancy is recorded.
    #[arg(long)]
    pub strict: bool,
}
