#![allow(dead_code)]

use cigan_core::gan::GanConfig;
use cigan_core::Dataset;
use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Isotropic Gaussian blobs, one per class, centred `gap` apart on a diagonal.
/// Classes are labelled `c0`, `c1`, ... and rows are interleaved by class.
pub fn gaussian_classes(counts: &[usize], n_features: usize, gap: f64, seed: u64) -> Dataset {
    let mut rng = cigan_core::seed::rng(seed);
    let n: usize = counts.iter().sum();
    let mut x = Array2::zeros((n, n_features));
    let mut y = Vec::with_capacity(n);
    let mut remaining = counts.to_vec();
    let mut row = 0;
    while row < n {
        for (class, left) in remaining.iter_mut().enumerate() {
            if *left == 0 {
                continue;
            }
            *left -= 1;
            for j in 0..n_features {
                let centre = if j % counts.len() == class { gap } else { 0.0 };
                let z: f64 = rng.sample(StandardNormal);
                x[[row, j]] = centre + z;
            }
            y.push(format!("c{class}"));
            row += 1;
        }
    }
    let names = (0..n_features).map(|j| format!("f{j}")).collect();
    Dataset::new(x, y, names, "label").unwrap()
}

/// One-feature samples in scaled space.
pub fn narrow_samples(m: usize, centre: f64, spread: f64, seed: u64) -> Array2<f64> {
    let mut rng = cigan_core::seed::rng(seed);
    Array2::from_shape_simple_fn((m, 1), || {
        let z: f64 = rng.sample(StandardNormal);
        (centre + spread * z).clamp(-0.99, 0.99)
    })
}

/// Equal mixture of two narrow modes at -0.6 and +0.6.
pub fn bimodal_samples(m: usize, seed: u64) -> Array2<f64> {
    let mut rng = cigan_core::seed::rng(seed);
    Array2::from_shape_fn((m, 1), |(i, _)| {
        let z: f64 = rng.sample(StandardNormal);
        let centre = if i % 2 == 0 { -0.6 } else { 0.6 };
        centre + 0.08 * z
    })
}

/// A GAN small enough to train hundreds of epochs in about a second.
pub fn small_gan(seed: u64) -> GanConfig {
    GanConfig {
        generator_hidden_layer_sizes: vec![16, 32],
        discriminator_hidden_layer_sizes: vec![32, 16],
        generator_learning_rate: 1e-3,
        discriminator_learning_rate: 1e-3,
        random_seed: seed,
        ..GanConfig::default()
    }
}

pub mod gradcheck {
    use cigan_core::nn::{init_network, Activation, DenseNetwork, OutputGradient};
    use ndarray::Array2;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    pub const STEP: f64 = 1e-5;
    pub const TOLERANCE: f64 = 1e-4;

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub enum Loss {
        /// Half squared error, gradient taken at the activation output.
        Squared,
        /// Softmax output with cross-entropy, fused gradient p - y.
        SoftmaxCrossEntropy,
        /// Sigmoid output with binary cross-entropy, fused gradient p - y.
        SigmoidBce,
    }

    #[derive(Debug)]
    pub struct Case {
        pub net: DenseNetwork,
        pub loss: Loss,
        pub x: Array2<f64>,
        pub y: Array2<f64>,
    }

    const SMOOTH: [Activation; 4] = [
        Activation::Selu,
        Activation::Sigmoid,
        Activation::Tanh,
        Activation::Linear,
    ];

    /// A random network with sizes up to [5, 8, 8, 3], mixed activations and
    /// a loss matched to its output activation.
    pub fn random_case(rng: &mut ChaCha8Rng, index: usize) -> Case {
        let depth = rng.random_range(1..=3);
        let mut sizes = vec![rng.random_range(1..=5)];
        for _ in 1..depth {
            sizes.push(rng.random_range(1..=8));
        }
        let loss = match index % 4 {
            0 => Loss::SoftmaxCrossEntropy,
            1 => Loss::SigmoidBce,
            _ => Loss::Squared,
        };
        let outputs = match loss {
            Loss::SoftmaxCrossEntropy => rng.random_range(2..=3),
            _ => rng.random_range(1..=3),
        };
        sizes.push(outputs);

        let output = match loss {
            Loss::SoftmaxCrossEntropy => Activation::Softmax,
            Loss::SigmoidBce => Activation::Sigmoid,
            Loss::Squared if index % 8 == 3 => Activation::Softmax,
            Loss::Squared => SMOOTH[rng.random_range(0..SMOOTH.len())],
        };
        let mut net = init_network(&sizes, Activation::Selu, output, rng.random()).unwrap();
        let last = net.layers().len() - 1;
        for (k, layer) in net.layers_mut().iter_mut().enumerate() {
            if k < last {
                layer.activation = SMOOTH[rng.random_range(0..SMOOTH.len())];
            }
            layer
                .bias
                .mapv_inplace(|_| 0.1 * rng.sample::<f64, _>(StandardNormal));
        }

        let m = rng.random_range(1..=6);
        let x = Array2::from_shape_simple_fn((m, sizes[0]), || rng.sample(StandardNormal));
        let y = match loss {
            Loss::SoftmaxCrossEntropy => {
                let mut y = Array2::zeros((m, outputs));
                for i in 0..m {
                    y[[i, rng.random_range(0..outputs)]] = 1.0;
                }
                y
            }
            Loss::SigmoidBce => {
                Array2::from_shape_simple_fn((m, outputs), || f64::from(rng.random_range(0..2u8)))
            }
            Loss::Squared => {
                Array2::from_shape_simple_fn((m, outputs), || rng.sample(StandardNormal))
            }
        };
        Case { net, loss, x, y }
    }

    /// Per-sample losses.
    fn sample_losses(case: &Case, net: &DenseNetwork, x: &Array2<f64>) -> Vec<f64> {
        let out = net.predict(x.view()).unwrap();
        out.outer_iter()
            .zip(case.y.outer_iter())
            .map(|(a, y)| {
                a.iter()
                    .zip(y.iter())
                    .map(|(&a, &y)| match case.loss {
                        Loss::Squared => 0.5 * (a - y).powi(2),
                        Loss::SoftmaxCrossEntropy => -y * a.ln(),
                        Loss::SigmoidBce => -(y * a.ln() + (1.0 - y) * (1.0 - a).ln()),
                    })
                    .sum()
            })
            .collect()
    }

    fn mean_loss(case: &Case, net: &DenseNetwork) -> f64 {
        let l = sample_losses(case, net, &case.x);
        l.iter().sum::<f64>() / l.len() as f64
    }

    fn rel_err(analytic: f64, numeric: f64) -> f64 {
        (analytic - numeric).abs() / analytic.abs().max(1.0)
    }

    /// Largest relative error over every parameter and every input entry.
    pub fn max_relative_error(case: &Case) -> f64 {
        let (out, cache) = case.net.forward(case.x.view()).unwrap();
        let g = &out - &case.y;
        let grad = match case.loss {
            Loss::Squared => OutputGradient::Output(g.view()),
            _ => OutputGradient::PreActivation(g.view()),
        };
        let (grads, input_grad) = case.net.backward_with_input(&cache, grad).unwrap();

        let mut worst: f64 = 0.0;
        let mut net = case.net.clone();
        for k in 0..net.layers().len() {
            let (rows, cols) = net.layers()[k].weights.dim();
            for i in 0..rows {
                for j in 0..cols {
                    let orig = net.layers()[k].weights[[i, j]];
                    net.layers_mut()[k].weights[[i, j]] = orig + STEP;
                    let plus = mean_loss(case, &net);
                    net.layers_mut()[k].weights[[i, j]] = orig - STEP;
                    let minus = mean_loss(case, &net);
                    net.layers_mut()[k].weights[[i, j]] = orig;
                    let numeric = (plus - minus) / (2.0 * STEP);
                    worst = worst.max(rel_err(grads.layers[k].weights[[i, j]], numeric));
                }
            }
            for j in 0..cols {
                let orig = net.layers()[k].bias[j];
                net.layers_mut()[k].bias[j] = orig + STEP;
                let plus = mean_loss(case, &net);
                net.layers_mut()[k].bias[j] = orig - STEP;
                let minus = mean_loss(case, &net);
                net.layers_mut()[k].bias[j] = orig;
                let numeric = (plus - minus) / (2.0 * STEP);
                worst = worst.max(rel_err(grads.layers[k].bias[j], numeric));
            }
        }

        let mut x = case.x.clone();
        for i in 0..x.nrows() {
            for j in 0..x.ncols() {
                let orig = x[[i, j]];
                x[[i, j]] = orig + STEP;
                let plus = sample_losses(case, &case.net, &x)[i];
                x[[i, j]] = orig - STEP;
                let minus = sample_losses(case, &case.net, &x)[i];
                x[[i, j]] = orig;
                let numeric = (plus - minus) / (2.0 * STEP);
                worst = worst.max(rel_err(input_grad[[i, j]], numeric));
            }
        }
        worst
    }
}
