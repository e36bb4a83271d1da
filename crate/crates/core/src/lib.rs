//! Class rebalancing for tabular data with one generative adversarial network
//! per minority class.
//!
//! The crate is organised bottom-up:
//!
//! * [`data`]: datasets, CSV ingestion, min-max scaling and stratified splits.
//! * [`nn`]: dense feed-forward networks, backpropagation and Adam.
//! * [`gan`]: generator/discriminator construction, training and sampling.
//! * [`resample`]: the `fit_resample` facade that equalizes class counts.
//! * [`eval`]: metrics, downstream classifiers, the evaluation pipeline and
//!   the hyperparameter sweep.

pub mod data;
pub mod eval;
pub mod gan;
pub mod nn;
pub mod resample;
pub mod seed;

pub use data::{class_counts, load_csv, stratified_split, Dataset, FeatureScaler, SplitSpec};
pub use eval::{
    run_pipeline, sweep, ClassMetrics, ClassifierSpec, ConfusionMatrix, PipelineReport,
    SweepOutcome,
};
pub use gan::{build_gan, generate, train_gan, GanConfig, GanModel, TrainLog};
pub use nn::{Activation, AdamState, DenseNetwork, Gradients};
pub use resample::{fit_resample, plan, BalancedDataset, Origin, ResamplePlan};
