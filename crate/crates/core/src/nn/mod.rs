//! Dense feed-forward networks trained by backpropagation and Adam.

mod activation;
mod adam;
mod loss;
mod network;

pub use activation::{selu, selu_grad, sigmoid, Activation, SELU_ALPHA, SELU_LAMBDA};
pub use adam::{AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON};
pub use loss::{bce_loss, cross_entropy_loss, BCE_CLAMP};
pub use network::{
    init_network, DenseNetwork, ForwardCache, Gradients, Layer, LayerGradients, OutputGradient,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NnError {
    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),
    #[error("expected input width {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("forward cache does not match this network")]
    CacheMismatch,
    #[error("parameter and gradient shapes differ")]
    ShapeMismatch,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}
