use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fdglm::{Family, Link};

use crate::dataset::NaPolicy;

#[derive(Debug, Parser)]
#[command(name = "fdglm", version, about = "GLM fits under fixed designs, design diagnostics and limit-theorem simulations")]
pub struct Cli {
    /// File of `key = value` lines supplying defaults for long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a GLM by maximum likelihood and report estimates, covariance and Wald intervals.
    Fit(FitArgs),
    /// Report design and information conditioning at a parameter value.
    Diagnose(DiagnoseArgs),
    /// Run a seeded Monte Carlo simulator.
    Sim(SimArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub response: String,
    /// Comma-separated covariate columns, in design order.
    #[arg(long, value_delimiter = ',')]
    pub covariates: Vec<String>,
    #[arg(long)]
    pub no_intercept: bool,
    #[arg(long, value_enum, default_value_t = NaPolicy::Fail)]
    pub na_policy: NaPolicy,
    /// poisson, bernoulli or gaussian.
    #[arg(long, default_value = "poisson")]
    pub family: Family,
    #[arg(long, default_value = "canonical")]
    pub link: Link,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub format: ReportFormat,
    /// Significant digits in tables.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Wald interval level.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated parameter value; defaults to the fitted estimate.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta0: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Simulator {
    Stpetersburg,
    Pareto,
    Spacings,
    Boosting,
    Gc,
    Dkw,
    KdeClt,
    Dependent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Uniform,
    Normal,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weights {
    Ones,
    Rank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Gaussian,
    Epanechnikov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(value_enum)]
    pub simulator: Simulator,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Comma-separated, strictly increasing sample sizes.
    #[arg(long, value_delimiter = ',', conflicts_with = "n")]
    pub n_grid: Option<Vec<usize>>,
    /// A single sample size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Deviation threshold; for `boosting`, the allowed failure probability.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Vote margin for `boosting`.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// AR(1) coefficient for `dependent`.
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Sampling law for `gc`, `dkw` and `kde-clt`.
    #[arg(long, value_enum)]
    pub dist: Option<Dist>,
    #[arg(long, value_enum, default_value_t = Weights::Ones)]
    pub weights: Weights,
    /// Comma-separated evaluation points for `kde-clt`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,1")]
    pub points: Vec<f64>,
    #[arg(long, value_enum, default_value_t = KernelArg::Gaussian)]
    pub kernel: KernelArg,
    /// Use the bandwidth `factor * n^(-1/5)` instead of the normal reference rule.
    #[arg(long)]
    pub bandwidth_factor: Option<f64>,
    #[arg(long, value_enum, default_value_t = SimFormat::Csv)]
    pub format: SimFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
