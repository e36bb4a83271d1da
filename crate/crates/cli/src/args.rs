use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "cigan",
    version,
    about = "Rebalance tabular classes with per-class GANs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Oversample minority classes and write the balanced CSV.
    Resample(ResampleArgs),
    /// Compare a classifier trained on original vs. augmented training data.
    Pipeline(PipelineArgs),
    /// Grid-search oversampler settings by validation macro-F1.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the class label column.
    #[arg(long)]
    pub target: String,
    /// JSON file with oversampler parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; must be empty unless --force is given.
    #[arg(long)]
    pub out: PathBuf,
    /// Seed for GAN training and, for pipeline and sweep, the data split.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for per-class GAN training.
    #[arg(long = "n-jobs")]
    pub n_jobs: Option<usize>,
    /// Write into a non-empty output directory.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Downstream classifier: gbt or softmax.
    #[arg(long, default_value = "gbt")]
    pub classifier: String,
    /// Train, validation and test fractions.
    #[arg(long, default_value = "0.6,0.2,0.2")]
    pub split: String,
}

#[derive(Debug, Args)]
pub struct ResampleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Evaluate at most this many grid points, in grid order.
    #[arg(long = "max-trials")]
    pub max_trials: Option<usize>,
}
