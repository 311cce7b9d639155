use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gek",
    version,
    about = "Simultaneous polynomial root finding with known multiplicities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the problem read from --input (or standard input)
    Solve(SolveArgs),
    /// Run the built-in sextic (x+2)^2 (x-1) (x-3)^3 from (-3, 0.1, 4)
    Demo(DemoArgs),
    /// Evaluate the sufficient convergence condition for a root system
    CheckTheorem(TheoremArgs),
    /// Solve a problem with known roots and estimate the per-root order
    Order(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Total,
    Serial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// multiplicity-aware update
    Gek,
    /// simple-root update; every multiplicity must be 1
    Ek,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem file (JSON); standard input when omitted
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    #[arg(long = "max-iter")]
    pub max_iterations: Option<usize>,
    #[arg(long = "step-tol")]
    pub step_tolerance: Option<f64>,
    /// Freezing threshold, relative to the evaluation's rounding scale
    #[arg(long = "res-tol")]
    pub residual_tolerance: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TheoremArgs {
    /// Problem file (JSON) holding `roots` and `multiplicities`; standard input when omitted
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Radius of the initial neighbourhoods
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    /// Contraction ratio, 0 < q < 1
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
}
