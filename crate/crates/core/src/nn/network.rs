use std::io::{Read, Write};

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Activation, NnError};
use crate::seed;

/// One affine transform followed by an activation.
/// `weights` is `inputs x outputs`, so a batch maps as `x.dot(w) + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn inputs(&self) -> usize {
        self.weights.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.weights.ncols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseNetwork {
    layers: Vec<Layer>,
}

/// Activations recorded by [`DenseNetwork::forward`] for the backward pass.
///
/// `inputs[k]` feeds layer `k`; `pre[k]` and `post[k]` are its pre- and
/// post-activation values.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    inputs: Vec<Array2<f64>>,
    pre: Vec<Array2<f64>>,
    post: Vec<Array2<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &Array2<f64> {
        self.post.last().expect("networks have at least one layer")
    }

    pub fn batch_size(&self) -> usize {
        self.inputs[0].nrows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGradients {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
}

/// Batch-averaged parameter gradients, shaped like the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGradients>,
}

impl Gradients {
    pub fn zeros_like(net: &DenseNetwork) -> Self {
        Self {
            layers: net
                .layers
                .iter()
                .map(|l| LayerGradients {
                    weights: Array2::zeros(l.weights.raw_dim()),
                    bias: Array1::zeros(l.bias.raw_dim()),
                })
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|g| g.weights.iter().chain(g.bias.iter()).copied())
    }
}

/// Where the caller's loss gradient is taken.
///
/// `Output` is dL/da for the final activation output `a`. `PreActivation`
/// is dL/dz for the final layer's pre-activation, used for the fused
/// sigmoid+binary-cross-entropy and softmax+cross-entropy pairs where
/// dL/dz = prediction - label.
///
/// In both cases each row is the gradient of that sample's own loss; the
/// parameter gradients returned are averaged over the batch.
#[derive(Debug, Clone, Copy)]
pub enum OutputGradient<'a> {
    Output(ArrayView2<'a, f64>),
    PreActivation(ArrayView2<'a, f64>),
}

/// LeCun-normal initialisation (std `1/sqrt(fan_in)`), zero biases.
///
/// Hidden layers use `hidden`, the final layer `output`.
pub fn init_network(
    sizes: &[usize],
    hidden: Activation,
    output: Activation,
    seed: u64,
) -> Result<DenseNetwork, NnError> {
    if sizes.len() < 2 {
        return Err(NnError::InvalidArchitecture(format!(
            "need at least 2 layer sizes, got {}",
            sizes.len()
        )));
    }
    if let Some(pos) = sizes.iter().position(|&s| s == 0) {
        return Err(NnError::InvalidArchitecture(format!(
            "layer size at position {pos} is zero"
        )));
    }
    let mut rng = seed::rng(seed);
    let last = sizes.len() - 2;
    let layers = sizes
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let (fan_in, fan_out) = (w[0], w[1]);
            let normal = Normal::new(0.0, 1.0 / (fan_in as f64).sqrt()).unwrap();
            let weights =
                Array2::from_shape_simple_fn((fan_in, fan_out), || normal.sample(&mut rng));
            Layer {
                weights,
                bias: Array1::zeros(fan_out),
                activation: if k == last { output } else { hidden },
            }
        })
        .collect();
    Ok(DenseNetwork { layers })
}

impl DenseNetwork {
    /// Assembles a network from explicit layers, checking that sizes chain.
    pub fn from_layers(layers: Vec<Layer>) -> Result<Self, NnError> {
        if layers.is_empty() {
            return Err(NnError::InvalidArchitecture("no layers".into()));
        }
        for (k, l) in layers.iter().enumerate() {
            if l.bias.len() != l.outputs() {
                return Err(NnError::InvalidArchitecture(format!(
                    "layer {k}: bias length {} but {} outputs",
                    l.bias.len(),
                    l.outputs()
                )));
            }
            if l.inputs() == 0 || l.outputs() == 0 {
                return Err(NnError::InvalidArchitecture(format!("layer {k} is empty")));
            }
        }
        for (k, pair) in layers.windows(2).enumerate() {
            if pair[0].outputs() != pair[1].inputs() {
                return Err(NnError::InvalidArchitecture(format!(
                    "layer {k} emits {} values but layer {} expects {}",
                    pair[0].outputs(),
                    k + 1,
                    pair[1].inputs()
                )));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    /// `[inputs, hidden..., outputs]`.
    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.input_size())
            .chain(self.layers.iter().map(Layer::outputs))
            .collect()
    }

    pub fn input_size(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_size(&self) -> usize {
        self.layers.last().unwrap().outputs()
    }

    pub fn n_params(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    /// All parameters, layer by layer, weights (row-major) before biases.
    pub fn params(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()).copied())
    }

    pub fn is_finite(&self) -> bool {
        self.params().all(f64::is_finite)
    }

    /// Output only, without keeping intermediate activations.
    pub fn predict(&self, batch: ArrayView2<'_, f64>) -> Result<Array2<f64>, NnError> {
        self.check_input(batch.ncols())?;
        let mut a = batch.to_owned();
        for l in &self.layers {
            let z = a.dot(&l.weights) + &l.bias;
            a = l.activation.apply(z.view());
        }
        Ok(a)
    }

    pub fn forward(
        &self,
        batch: ArrayView2<'_, f64>,
    ) -> Result<(Array2<f64>, ForwardCache), NnError> {
        self.check_input(batch.ncols())?;
        let n = self.layers.len();
        let mut cache = ForwardCache {
            inputs: Vec::with_capacity(n),
            pre: Vec::with_capacity(n),
            post: Vec::with_capacity(n),
        };
        let mut a = batch.to_owned();
        for l in &self.layers {
            let z = a.dot(&l.weights) + &l.bias;
            let out = l.activation.apply(z.view());
            cache.inputs.push(a);
            cache.pre.push(z);
            a = out.clone();
            cache.post.push(out);
        }
        Ok((a, cache))
    }

    pub fn backward(
        &self,
        cache: &ForwardCache,
        grad: OutputGradient<'_>,
    ) -> Result<Gradients, NnError> {
        self.backward_with_input(cache, grad).map(|(g, _)| g)
    }

    /// Backward pass that also returns the per-sample gradient with respect to
    /// the network input (not batch-averaged), for chaining into an upstream
    /// network.
    pub fn backward_with_input(
        &self,
        cache: &ForwardCache,
        grad: OutputGradient<'_>,
    ) -> Result<(Gradients, Array2<f64>), NnError> {
        self.check_cache(cache)?;
        let m = cache.batch_size();
        let last = self.layers.len() - 1;
        let out_shape = cache.post[last].dim();
        let mut delta = match grad {
            OutputGradient::Output(g) => {
                if g.dim() != out_shape {
                    return Err(NnError::CacheMismatch);
                }
                self.layers[last].activation.backprop(
                    g,
                    cache.pre[last].view(),
                    cache.post[last].view(),
                )
            }
            OutputGradient::PreActivation(g) => {
                if g.dim() != out_shape {
                    return Err(NnError::CacheMismatch);
                }
                g.to_owned()
            }
        };

        let scale = if m == 0 { 0.0 } else { 1.0 / m as f64 };
        let mut layers = Vec::with_capacity(self.layers.len());
        for k in (0..self.layers.len()).rev() {
            let l = &self.layers[k];
            let weights = cache.inputs[k].t().dot(&delta) * scale;
            let bias = delta.sum_axis(Axis(0)) * scale;
            layers.push(LayerGradients { weights, bias });
            let upstream = delta.dot(&l.weights.t());
            delta = if k > 0 {
                let below = &self.layers[k - 1];
                below.activation.backprop(
                    upstream.view(),
                    cache.pre[k - 1].view(),
                    cache.post[k - 1].view(),
                )
            } else {
                upstream
            };
        }
        layers.reverse();
        Ok((Gradients { layers }, delta))
    }

    fn check_input(&self, width: usize) -> Result<(), NnError> {
        if width != self.input_size() {
            return Err(NnError::DimensionMismatch {
                expected: self.input_size(),
                found: width,
            });
        }
        Ok(())
    }

    fn check_cache(&self, cache: &ForwardCache) -> Result<(), NnError> {
        let ok = cache.inputs.len() == self.layers.len()
            && cache.pre.len() == self.layers.len()
            && cache.post.len() == self.layers.len()
            && self.layers.iter().enumerate().all(|(k, l)| {
                cache.inputs[k].ncols() == l.inputs() && cache.pre[k].ncols() == l.outputs()
            });
        if ok {
            Ok(())
        } else {
            Err(NnError::CacheMismatch)
        }
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<(), NnError> {
        serde_json::to_writer(writer, &NetworkRecord::from(self))
            .map_err(|e| NnError::Checkpoint(e.to_string()))
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self, NnError> {
        let record: NetworkRecord =
            serde_json::from_reader(reader).map_err(|e| NnError::Checkpoint(e.to_string()))?;
        record.try_into()
    }
}

/// Checkpoint layout: sizes, activation tags and row-major parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct NetworkRecord {
    sizes: Vec<usize>,
    activations: Vec<Activation>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

impl From<&DenseNetwork> for NetworkRecord {
    fn from(net: &DenseNetwork) -> Self {
        Self {
            sizes: net.sizes(),
            activations: net.layers.iter().map(|l| l.activation).collect(),
            weights: net
                .layers
                .iter()
                .map(|l| l.weights.iter().copied().collect())
                .collect(),
            biases: net.layers.iter().map(|l| l.bias.to_vec()).collect(),
        }
    }
}

impl TryFrom<NetworkRecord> for DenseNetwork {
    type Error = NnError;

    fn try_from(r: NetworkRecord) -> Result<Self, NnError> {
        let n = r.sizes.len().saturating_sub(1);
        if n == 0 || r.activations.len() != n || r.weights.len() != n || r.biases.len() != n {
            return Err(NnError::Checkpoint("layer counts disagree".into()));
        }
        let layers = (0..n)
            .map(|k| {
                let weights =
                    Array2::from_shape_vec((r.sizes[k], r.sizes[k + 1]), r.weights[k].clone())
                        .map_err(|e| NnError::Checkpoint(format!("layer {k}: {e}")))?;
                Ok(Layer {
                    weights,
                    bias: Array1::from(r.biases[k].clone()),
                    activation: r.activations[k],
                })
            })
            .collect::<Result<Vec<_>, NnError>>()?;
        let net = DenseNetwork::from_layers(layers)?;
        if !net.is_finite() {
            return Err(NnError::Checkpoint("non-finite parameter".into()));
        }
        Ok(net)
    }
}

impl Serialize for DenseNetwork {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NetworkRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseNetwork {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let record = NetworkRecord::deserialize(d)?;
        DenseNetwork::try_from(record).map_err(serde::de::Error::custom)
    }
}
