use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "omega", version, about = "Ω criteria and circle-rotation simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classifiers (i)-(v) and condition B for one θ
    Analyze(AnalyzeArgs),
    /// Partial sums of the series criterion for θ and φ
    KimSeries(KimArgs),
    /// Target-union measures and hit counts of the orbit qθ mod 1
    Simulate(SimulateArgs),
    /// Build the counterexample step ψ, or a step φ from a convergent table
    ConstructPsi(ConstructArgs),
    /// Dyadic Q_m / κ_m / λ_m diagnostics for θ and φ
    Diagnostics(DiagnosticsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    JsonTree,
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Output directory
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed recorded in every output; drives the sampling in `simulate`
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct WindowArgs {
    /// Windows cover the last (1 - RHO) fraction of indices
    #[arg(long = "window", default_value_t = 0.5)]
    pub rho: f64,
    /// Stability gap separating confident verdicts from inconclusive ones
    #[arg(long, default_value_t = 0.05)]
    pub gap: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub theta: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub depth: usize,
    /// Strictly decreasing ε values for condition B
    #[arg(long, value_delimiter = ',')]
    pub eps_grid: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct KimArgs {
    #[arg(long)]
    pub theta: PathBuf,
    /// φ file, or a ψ file whose dual is used
    #[arg(long)]
    pub psi: PathBuf,
    #[arg(long, default_value_t = 2000)]
    pub depth: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub theta: PathBuf,
    /// ψ file, or a φ file whose dual is used
    #[arg(long)]
    pub psi: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub q0: u64,
    #[arg(long, default_value_t = 100_000)]
    pub q: u64,
    /// Strictly increasing Q values; default: powers of ten above Q0, then Q
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<u64>>,
    /// Number of random targets s for hit counts
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Certified error allowed on each qθ mod 1
    #[arg(long, default_value_t = omega_core::orbit::DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstructArgs {
    /// Exponents n_0 = 0 < n_1 < … with gaps n_k - n_{k-1} >= k
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["theta", "k_seq"])]
    pub remark_n: Option<Vec<u64>>,
    /// Range of the greatest Khinchin minorant; default: the step's last block
    #[arg(long, requires = "remark_n")]
    pub range: Option<u64>,
    #[arg(long, requires = "k_seq")]
    pub theta: Option<PathBuf>,
    /// Indices k_0 = 0 < k_1 < … into the convergent table
    #[arg(long, value_delimiter = ',', requires = "theta")]
    pub k_seq: Option<Vec<usize>>,
    #[arg(long, default_value_t = 60)]
    pub depth: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct DiagnosticsArgs {
    #[arg(long)]
    pub theta: PathBuf,
    /// φ file, or a ψ file whose dual is used
    #[arg(long)]
    pub psi: PathBuf,
    #[arg(long, default_value_t = 300)]
    pub depth: usize,
    #[arg(long, default_value_t = 6)]
    pub m_max: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}
