use ndarray::{Array2, ArrayView2};

use super::{encode_labels, ClassifierError};
use crate::nn::{init_network, Activation, DenseNetwork, OutputGradient};

/// Multinomial logistic regression trained by full-batch gradient descent on
/// cross-entropy.
#[derive(Debug, Clone)]
pub struct SoftmaxRegression {
    net: DenseNetwork,
    classes: Vec<String>,
}

impl SoftmaxRegression {
    pub fn fit(
        x: ArrayView2<'_, f64>,
        y: &[String],
        learning_rate: f64,
        epochs: usize,
        seed: u64,
    ) -> Result<Self, ClassifierError> {
        let (classes, codes) = encode_labels(y);
        if classes.len() < 2 {
            return Err(ClassifierError::SingleClassSoftmax);
        }
        let k = classes.len();
        let onehot =
            Array2::from_shape_fn((y.len(), k), |(i, j)| f64::from(u8::from(codes[i] == j)));
        let mut net = init_network(
            &[x.ncols(), k],
            Activation::Linear,
            Activation::Softmax,
            seed,
        )
        .expect("non-empty sizes");
        for _ in 0..epochs {
            let (probs, cache) = net.forward(x).expect("width fixed above");
            let residual = probs - &onehot;
            let grads = net
                .backward(&cache, OutputGradient::PreActivation(residual.view()))
                .expect("cache from this network");
            for (layer, g) in net.layers_mut().iter_mut().zip(&grads.layers) {
                layer.weights.scaled_add(-learning_rate, &g.weights);
                layer.bias.scaled_add(-learning_rate, &g.bias);
            }
        }
        Ok(Self { net, classes })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<String>, ClassifierError> {
        let probs = self
            .net
            .predict(x)
            .map_err(|_| ClassifierError::DimensionMismatch {
                expected: self.net.input_size(),
                found: x.ncols(),
            })?;
        Ok(probs
            .rows()
            .into_iter()
            .map(|row| self.classes[argmax(row.iter().copied())].clone())
            .collect())
    }
}

/// Index of the largest value; the first one wins ties.
pub(crate) fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}
