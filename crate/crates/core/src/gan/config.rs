use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GanError;
use crate::nn::Activation;

/// Which classes to oversample.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum MinorClasses {
    /// Every class below the majority count.
    #[default]
    All,
    /// Only the listed labels.
    List(Vec<String>),
}

impl Serialize for MinorClasses {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::All => s.serialize_str("all"),
            Self::List(labels) => labels.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for MinorClasses {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "all" => Ok(Self::All),
            serde_json::Value::Array(items) => items
                .into_iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => Ok(s),
                    serde_json::Value::Number(n) => Ok(n.to_string()),
                    other => Err(D::Error::custom(format!(
                        "class label must be a string or number, got {other}"
                    ))),
                })
                .collect::<Result<_, _>>()
                .map(Self::List),
            other => Err(D::Error::custom(format!(
                "minor_classes must be \"all\" or a list of labels, got {other}"
            ))),
        }
    }
}

/// Latent noise width: half the feature count, or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CodingSize {
    #[default]
    Auto,
    Fixed(usize),
}

impl Serialize for CodingSize {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Auto => s.serialize_str("auto"),
            Self::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for CodingSize {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "auto" => Ok(Self::Auto),
            serde_json::Value::Number(n) => {
                n.as_u64().map(|n| Self::Fixed(n as usize)).ok_or_else(|| {
                    D::Error::custom(format!(
                        "coding_size must be a non-negative integer, got {n}"
                    ))
                })
            }
            other => Err(D::Error::custom(format!(
                "coding_size must be \"auto\" or an integer, got {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Optimizer {
    #[default]
    #[serde(rename = "adam", alias = "Adam", alias = "keras.optimizers.Adam")]
    Adam,
}

/// The tuning surface of the oversampler. Field names double as the keys of
/// the JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GanConfig {
    pub minor_classes: MinorClasses,
    pub coding_size: CodingSize,
    pub batch_size: usize,
    pub max_iter: usize,
    pub generator_hidden_layer_sizes: Vec<usize>,
    pub discriminator_hidden_layer_sizes: Vec<usize>,
    pub generator_hidden_layer_activation: Activation,
    pub discriminator_hidden_layer_activation: Activation,
    pub generator_optimizer: Optimizer,
    pub discriminator_optimizer: Optimizer,
    pub generator_learning_rate: f64,
    pub discriminator_learning_rate: f64,
    pub random_seed: u64,
    pub n_jobs: usize,
}

impl Default for GanConfig {
    fn default() -> Self {
        Self {
            minor_classes: MinorClasses::All,
            coding_size: CodingSize::Auto,
            batch_size: 32,
            max_iter: 10,
            generator_hidden_layer_sizes: vec![100, 200, 300, 400, 500],
            discriminator_hidden_layer_sizes: vec![500, 400, 300, 200, 100],
            generator_hidden_layer_activation: Activation::Selu,
            discriminator_hidden_layer_activation: Activation::Selu,
            generator_optimizer: Optimizer::Adam,
            discriminator_optimizer: Optimizer::Adam,
            generator_learning_rate: 1e-4,
            discriminator_learning_rate: 1e-4,
            random_seed: 42,
            n_jobs: 1,
        }
    }
}

impl GanConfig {
    pub fn validate(&self) -> Result<(), GanError> {
        let bad = |msg: String| Err(GanError::InvalidConfig(msg));
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1".into());
        }
        for (name, sizes) in [
            (
                "generator_hidden_layer_sizes",
                &self.generator_hidden_layer_sizes,
            ),
            (
                "discriminator_hidden_layer_sizes",
                &self.discriminator_hidden_layer_sizes,
            ),
        ] {
            if sizes.is_empty() || sizes.contains(&0) {
                return bad(format!("{name} must be a non-empty list of positive sizes"));
            }
        }
        for (name, lr) in [
            ("generator_learning_rate", self.generator_learning_rate),
            (
                "discriminator_learning_rate",
                self.discriminator_learning_rate,
            ),
        ] {
            if !(lr.is_finite() && lr > 0.0) {
                return bad(format!("{name} must be a positive number, got {lr}"));
            }
        }
        for (name, act) in [
            (
                "generator_hidden_layer_activation",
                self.generator_hidden_layer_activation,
            ),
            (
                "discriminator_hidden_layer_activation",
                self.discriminator_hidden_layer_activation,
            ),
        ] {
            if act == Activation::Softmax {
                return bad(format!("{name} cannot be softmax"));
            }
        }
        if self.coding_size == CodingSize::Fixed(0) {
            return Err(GanError::InvalidCodingSize(0));
        }
        if self.n_jobs == 0 {
            return bad("n_jobs must be at least 1".into());
        }
        if let MinorClasses::List(labels) = &self.minor_classes {
            if labels.is_empty() {
                return bad("minor_classes list is empty".into());
            }
        }
        Ok(())
    }

    /// Advisory checks on layer ordering: generator widths should grow,
    /// discriminator widths should shrink.
    pub fn layer_order_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let g = &self.generator_hidden_layer_sizes;
        if g.windows(2).any(|w| w[0] > w[1]) {
            out.push(format!(
                "generator_hidden_layer_sizes {g:?} are not in ascending order"
            ));
        }
        let d = &self.discriminator_hidden_layer_sizes;
        if d.windows(2).any(|w| w[0] < w[1]) {
            out.push(format!(
                "discriminator_hidden_layer_sizes {d:?} are not in descending order"
            ));
        }
        out
    }
}

/// Latent width for `n_features` features.
pub fn resolve_coding_size(config: &GanConfig, n_features: usize) -> Result<usize, GanError> {
    match config.coding_size {
        CodingSize::Auto => Ok((n_features / 2).max(1)),
        CodingSize::Fixed(0) => Err(GanError::InvalidCodingSize(0)),
        CodingSize::Fixed(n) => Ok(n),
    }
}
