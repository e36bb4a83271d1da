mod common;

use std::collections::HashSet;

use cigan_core::nn::Activation;
use common::gradcheck::{max_relative_error, random_case, Loss, TOLERANCE};

#[test]
fn analytic_gradients_match_finite_differences() {
    let mut rng = cigan_core::seed::rng(2024);
    let mut seen_activations = HashSet::new();
    let mut seen_losses = HashSet::new();
    for index in 0..40 {
        let case = random_case(&mut rng, index);
        for layer in case.net.layers() {
            seen_activations.insert(layer.activation.to_string());
        }
        seen_losses.insert(format!("{:?}", case.loss));
        let err = max_relative_error(&case);
        assert!(
            err < TOLERANCE,
            "case {index} sizes {:?} loss {:?}: relative error {err:e}",
            case.net.sizes(),
            case.loss
        );
    }
    for a in [
        Activation::Selu,
        Activation::Sigmoid,
        Activation::Tanh,
        Activation::Linear,
        Activation::Softmax,
    ] {
        assert!(
            seen_activations.contains(&a.to_string()),
            "{a} never exercised"
        );
    }
    for l in [Loss::Squared, Loss::SoftmaxCrossEntropy, Loss::SigmoidBce] {
        assert!(
            seen_losses.contains(&format!("{l:?}")),
            "{l:?} never exercised"
        );
    }
}

#[test]
fn largest_architecture_is_checked() {
    use cigan_core::nn::init_network;
    let mut rng = cigan_core::seed::rng(7);
    let mut case = random_case(&mut rng, 0);
    case.net = init_network(&[5, 8, 8, 3], Activation::Selu, Activation::Softmax, 99).unwrap();
    case.x =
        ndarray::Array2::from_shape_fn((4, 5), |(i, j)| (i as f64 - 1.5) * 0.3 + j as f64 * 0.2);
    case.y = ndarray::Array2::from_shape_fn((4, 3), |(i, j)| f64::from(u8::from(i % 3 == j)));
    assert!(max_relative_error(&case) < TOLERANCE);
}
