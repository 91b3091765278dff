use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "sieve", version, about = "Adaptive sieving solver for sparse regression models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Generate a synthetic bundle.
    Gen(GenArgs),
    /// Solve at a single λ.
    Solve(SolveArgs),
    /// Solve along a λ grid with sieving.
    Path(PathArgs),
    /// Compare the sieving path against baselines.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LossArg {
    Ls,
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegArg {
    Lasso,
    Enet,
    Sgl,
    Exlasso,
    Slope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionArg {
    Kkt,
    Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerArg {
    Apg,
    Proxgrad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Warmstart,
    Ssr,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// Number of samples.
    #[arg(long)]
    pub m: usize,
    /// Number of groups.
    #[arg(long)]
    pub g: usize,
    /// Features per group.
    #[arg(long)]
    pub p: usize,
    /// Fraction of nonzeros per group in the true coefficients.
    #[arg(long)]
    pub sparsity: f64,
    #[arg(long, value_enum, default_value = "ls")]
    pub loss: LossArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for the bundle.
    #[arg(long)]
    pub out: PathBuf,
}

/// Where the problem comes from.
#[derive(Debug, Args, Serialize)]
pub struct DataArgs {
    /// Bundle directory written by `gen`.
    #[arg(long, conflicts_with = "libsvm", required_unless_present = "libsvm")]
    pub data: Option<PathBuf>,
    /// libsvm text file.
    #[arg(long)]
    pub libsvm: Option<PathBuf>,
    /// Loss for libsvm input (bundles record their own).
    #[arg(long, value_enum)]
    pub loss: Option<LossArg>,
    /// Column count for libsvm input; defaults to the largest index present.
    #[arg(long)]
    pub n_features: Option<usize>,
    /// Group file (one group per line, 0-based indices).
    #[arg(long, conflicts_with = "group_size")]
    pub groups: Option<PathBuf>,
    /// Contiguous groups of this size.
    #[arg(long)]
    pub group_size: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    /// Penalty family.
    #[arg(long, value_enum)]
    pub reg: RegArg,
    /// Elastic net: λ2 = ratio·λ1.
    #[arg(long, default_value_t = 0.1)]
    pub enet_ratio: f64,
    /// Sparse group lasso: λ2 = factor·λ1; defaults to 1/w_max.
    #[arg(long)]
    pub sgl_l2_factor: Option<f64>,
    /// SLOPE: level of the Benjamini–Hochberg weight sequence.
    #[arg(long, default_value_t = 0.1)]
    pub slope_q: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SolverArgs {
    /// Stopping tolerance for the chosen criterion.
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Relative KKT residual or absolute residual norm.
    #[arg(long, value_enum, default_value = "kkt")]
    pub criterion: CriterionArg,
    /// Most features added per sieving round.
    #[arg(long, default_value_t = 500)]
    pub kmax: usize,
    /// Initial set size factor: the correlation test keeps init_k·⌈√n⌉ features.
    #[arg(long, default_value_t = 10)]
    pub init_k: usize,
    /// Cap on sieving rounds; capped solves are reported as flagged.
    #[arg(long)]
    pub max_rounds: Option<usize>,
    /// Reduced-problem solver: accelerated or plain proximal gradient.
    #[arg(long, value_enum, default_value = "apg")]
    pub inner: InnerArg,
    /// Iteration cap per reduced solve.
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    /// Backtracking step sizes instead of the power-iteration bound.
    #[arg(long)]
    pub backtracking: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Report file; nothing is written without it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format; defaults to the extension of --out.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Absolute penalty level.
    #[arg(long, conflicts_with = "lambda_c", required_unless_present = "lambda_c")]
    pub lambda: Option<f64>,
    /// Penalty level relative to ‖Aᵀb‖∞.
    #[arg(long)]
    pub lambda_c: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Solve on all features, without sieving.
    #[arg(long)]
    pub no_as: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    /// Largest λ as a multiple of ‖Aᵀb‖∞.
    #[arg(long, default_value_t = 1e-1)]
    pub grid_hi: f64,
    /// Smallest λ as a multiple of ‖Aᵀb‖∞.
    #[arg(long, default_value_t = 1e-4)]
    pub grid_lo: f64,
    /// Number of log-spaced grid points.
    #[arg(long, default_value_t = 20)]
    pub grid_n: usize,
    /// Threshold defining the active set passed between grid points.
    #[arg(long, default_value_t = 1e-10)]
    pub eps_hat: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PathArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    pub path: PathArgs,
    /// Comma-separated baselines; ssr needs least squares with lasso.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "warmstart")]
    pub baselines: Vec<Baseline>,
    /// Directory for the per-method path reports.
    #[arg(long)]
    pub reports_dir: Option<PathBuf>,
}
