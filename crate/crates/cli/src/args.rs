use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Minimal-setting verification of bipartite states and two-qubit gates.
///
/// Angles and phases on the command line are multiples of π.
#[derive(Debug, Parser)]
#[command(name = "qvk", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schmidt spectrum, canonical angles, region and μ of a two-qubit unitary.
    Analyze(AnalyzeArgs),
    /// Two-setting strategy, spectral gap and sample count for a pure state.
    VerifyState(VerifyStateArgs),
    /// Minimal-setting gate-verification protocol as JSON.
    Synthesize(SynthesizeArgs),
    /// Monte-Carlo run of a scenario file.
    Simulate(SimulateArgs),
    /// CSV data for the accessible-region plots.
    Region(RegionArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct UnitarySource {
    /// JSON matrix file.
    #[arg(long, value_name = "FILE")]
    pub unitary: Option<PathBuf>,
    /// Canonical angles in units of π, e.g. `0.125,0.125,0.125`.
    #[arg(long, value_name = "A1,A2,A3", value_delimiter = ',', allow_hyphen_values = true)]
    pub angles: Option<Vec<f64>>,
    /// CNOT, CZ, CPHASE, SWAP or I.
    #[arg(long, value_name = "NAME")]
    pub gate: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: UnitarySource,
    /// Phase of CPHASE in units of π.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Seed of the product-state sampler behind the d_Prod estimate.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Product-state samples for the d_Prod estimate.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct VerifyStateArgs {
    /// JSON vector file; normalized on load.
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[arg(long, value_name = "DA,DB", value_delimiter = ',', required = true)]
    pub dims: Vec<usize>,
    #[arg(long, requires = "delta")]
    pub eps: Option<f64>,
    #[arg(long, requires = "eps")]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[command(flatten)]
    pub source: UnitarySource,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Write the protocol here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_name = "FILE")]
    pub scenario: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionMode {
    /// `|ζ0|²` over the (α2, α3) plane at α1 = π/4.
    Contour,
    /// Accessible `(ξ1, ξ2, ξ3)` at fixed `|ζ0|`.
    Ternary,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, value_enum)]
    pub mode: RegionMode,
    /// Largest Schmidt coefficient `|ζ0|`, required in ternary mode.
    #[arg(long)]
    pub zeta0: Option<f64>,
    /// Nodes per axis.
    #[arg(long, default_value_t = 51)]
    pub grid: usize,
}
