//! One generator/discriminator pair per class: construction, adversarial
//! training and sampling.

mod config;
mod model;

pub use config::{resolve_coding_size, CodingSize, GanConfig, MinorClasses, Optimizer};
pub use model::{build_gan, generate, train_gan, EpochLoss, GanModel, TrainLog};

use thiserror::Error;

use crate::nn::NnError;

#[derive(Debug, Error)]
pub enum GanError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("coding_size must be at least 1, got {0}")]
    InvalidCodingSize(usize),
    #[error("class `{label}` has {count} samples; at least 2 are needed to train a GAN")]
    DegenerateClass { label: String, count: usize },
    #[error("training diverged for class `{label}` at epoch {epoch}: {detail}")]
    NonFiniteLoss {
        label: String,
        epoch: usize,
        detail: String,
    },
    #[error(transparent)]
    Network(#[from] NnError),
}
