use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Intrinsic moment norms: estimation, confidence intervals, sub-Gaussian
/// plots, norm comparisons and bandit experiments.
#[derive(Debug, Clone, Parser)]
#[command(name = "subgauss", version)]
pub struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result to this file (a run manifest is written next to it).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Estimate the intrinsic moment norm of a one-column CSV sample.
    Estimate(EstimateArgs),
    /// Confidence interval for a mean.
    Ci(CiArgs),
    /// Sub-Gaussian plot data and tendency verdict.
    Sgplot(SgplotArgs),
    /// Half-lengths of confidence intervals for centered Bernoulli variables.
    CompareNorms(CompareArgs),
    /// Run a bandit experiment described by a JSON config.
    Bandit(BanditArgs),
    /// Re-run the command recorded in a run manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    De,
    Mom,
    MomLocv,
    Boot,
    LooHl,
    Op,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// One-column CSV file (header optional).
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "de")]
    pub method: EstimateMethod,
    /// Number of blocks (mom only; defaults to 2 ceil(ln n)).
    #[arg(long)]
    pub b: Option<usize>,
    /// Largest moment index (defaults to ceil(ln n)).
    #[arg(long)]
    pub kappa: Option<u32>,
    /// Center at this value instead of the sample mean.
    #[arg(long, allow_hyphen_values = true)]
    pub known_mean: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMethodArg {
    Intrinsic,
    Hoeffding,
    BeClt,
    WrongHoeffding,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CiArgs {
    #[arg(long, value_enum)]
    pub method: CiMethodArg,
    /// Sample file; supplies n and the center when given.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sample size (when no input file is given).
    #[arg(long)]
    pub n: Option<usize>,
    /// Interval center (when no input file is given; defaults to 0).
    #[arg(long, allow_hyphen_values = true)]
    pub mean: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Intrinsic moment norm (intrinsic).
    #[arg(long)]
    pub norm: Option<f64>,
    /// Use the symmetric constant (intrinsic).
    #[arg(long)]
    pub symmetric: bool,
    /// Lower bound of the support (hoeffding).
    #[arg(long, allow_hyphen_values = true)]
    pub lower: Option<f64>,
    /// Upper bound of the support (hoeffding).
    #[arg(long, allow_hyphen_values = true)]
    pub upper: Option<f64>,
    /// Gaussian standard deviation (wrong-hoeffding).
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SgplotArgs {
    /// One-column CSV file with at least 10 observations.
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    /// Bernoulli success probability; the grid 0.05, 0.10, ..., 0.95 when omitted.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BanditArgs {
    /// Experiment config (JSON).
    pub config: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
}
