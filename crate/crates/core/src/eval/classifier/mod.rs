//! Downstream classifiers used to score original vs. augmented training data.

mod softmax;
mod trees;

pub use softmax::SoftmaxRegression;
pub use trees::{GradientBoostedTrees, MAX_BINS};

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifierError {
    #[error("softmax regression needs at least two classes")]
    SingleClassSoftmax,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("{rows} feature rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("invalid classifier hyperparameter: {0}")]
    InvalidSpec(String),
    #[error("expected {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ClassifierSpec {
    SoftmaxRegression {
        learning_rate: f64,
        epochs: usize,
    },
    GradientBoostedTrees {
        n_trees: usize,
        max_depth: usize,
        shrinkage: f64,
        #[serde(default = "default_min_samples_leaf")]
        min_samples_leaf: usize,
    },
}

fn default_min_samples_leaf() -> usize {
    5
}

impl Default for ClassifierSpec {
    fn default() -> Self {
        Self::gradient_boosted_trees()
    }
}

impl ClassifierSpec {
    pub fn gradient_boosted_trees() -> Self {
        Self::GradientBoostedTrees {
            n_trees: 100,
            max_depth: 3,
            shrinkage: 0.1,
            min_samples_leaf: default_min_samples_leaf(),
        }
    }

    pub fn softmax_regression() -> Self {
        Self::SoftmaxRegression {
            learning_rate: 0.5,
            epochs: 300,
        }
    }

    /// Default spec for a kind name (`gbt`, `gradient-boosted-trees`,
    /// `softmax`, `softmax-regression`).
    pub fn from_kind(kind: &str) -> Option<Self> {
        match kind {
            "gbt" | "gradient-boosted-trees" | "trees" => Some(Self::gradient_boosted_trees()),
            "softmax" | "softmax-regression" => Some(Self::softmax_regression()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        let bad = |m: &str| Err(ClassifierError::InvalidSpec(m.to_string()));
        match *self {
            Self::SoftmaxRegression {
                learning_rate,
                epochs,
            } => {
                if !(learning_rate.is_finite() && learning_rate > 0.0) {
                    return bad("learning_rate must be positive");
                }
                if epochs == 0 {
                    return bad("epochs must be positive");
                }
            }
            Self::GradientBoostedTrees {
                n_trees,
                max_depth,
                shrinkage,
                min_samples_leaf,
            } => {
                if n_trees == 0 || max_depth == 0 || min_samples_leaf == 0 {
                    return bad("n_trees, max_depth and min_samples_leaf must be positive");
                }
                if !(shrinkage.is_finite() && shrinkage > 0.0) {
                    return bad("shrinkage must be positive");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum Classifier {
    Softmax(SoftmaxRegression),
    Trees(GradientBoostedTrees),
}

impl Classifier {
    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<String>, ClassifierError> {
        match self {
            Self::Softmax(m) => m.predict(x),
            Self::Trees(m) => m.predict(x),
        }
    }

    pub fn classes(&self) -> &[String] {
        match self {
            Self::Softmax(m) => m.classes(),
            Self::Trees(m) => m.classes(),
        }
    }
}

pub fn train_classifier(
    x: ArrayView2<'_, f64>,
    y: &[String],
    spec: &ClassifierSpec,
    seed: u64,
) -> Result<Classifier, ClassifierError> {
    spec.validate()?;
    if x.nrows() != y.len() {
        return Err(ClassifierError::LengthMismatch {
            rows: x.nrows(),
            labels: y.len(),
        });
    }
    if y.is_empty() {
        return Err(ClassifierError::EmptyTrainingSet);
    }
    match *spec {
        ClassifierSpec::SoftmaxRegression {
            learning_rate,
            epochs,
        } => SoftmaxRegression::fit(x, y, learning_rate, epochs, seed).map(Classifier::Softmax),
        ClassifierSpec::GradientBoostedTrees {
            n_trees,
            max_depth,
            shrinkage,
            min_samples_leaf,
        } => Ok(Classifier::Trees(GradientBoostedTrees::fit(
            x,
            y,
            n_trees,
            max_depth,
            shrinkage,
            min_samples_leaf,
        ))),
    }
}

/// Distinct labels in first-appearance order and each row's class index.
pub(crate) fn encode_labels(y: &[String]) -> (Vec<String>, Vec<usize>) {
    let mut classes: Vec<String> = Vec::new();
    let codes = y
        .iter()
        .map(|l| match classes.iter().position(|c| c == l) {
            Some(i) => i,
            None => {
                classes.push(l.clone());
                classes.len() - 1
            }
        })
        .collect();
    (classes, codes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn accuracy(pred: &[String], y: &[String]) -> f64 {
        pred.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / y.len() as f64
    }

    fn gaussian_pair(n: usize, gap: f64, seed: u64) -> (Array2<f64>, Vec<String>) {
        let mut rng = crate::seed::rng(seed);
        let mut x = Array2::zeros((n, 2));
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let c = i % 2;
            let shift = if c == 0 { -gap / 2.0 } else { gap / 2.0 };
            x[[i, 0]] = rng.sample::<f64, _>(StandardNormal) + shift;
            x[[i, 1]] = rng.sample::<f64, _>(StandardNormal);
            y.push(format!("c{c}"));
        }
        (x, y)
    }

    fn xor(n: usize, seed: u64) -> (Array2<f64>, Vec<String>) {
        let mut rng = crate::seed::rng(seed);
        let mut x = Array2::zeros((n, 2));
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            x[[i, 0]] = a;
            x[[i, 1]] = b;
            y.push(
                if (a > 0.0) == (b > 0.0) {
                    "same"
                } else {
                    "diff"
                }
                .to_string(),
            );
        }
        (x, y)
    }

    #[test]
    fn softmax_separates_distant_gaussians() {
        let (x, y) = gaussian_pair(300, 4.0, 1);
        let clf = train_classifier(x.view(), &y, &ClassifierSpec::softmax_regression(), 0).unwrap();
        let acc = accuracy(&clf.predict(x.view()).unwrap(), &y);
        assert!(acc >= 0.95, "accuracy {acc}");
    }

    #[test]
    fn xor_needs_trees() {
        let (x, y) = xor(400, 3);
        let trees = ClassifierSpec::GradientBoostedTrees {
            n_trees: 20,
            max_depth: 2,
            shrinkage: 0.3,
            min_samples_leaf: 5,
        };
        let t = train_classifier(x.view(), &y, &trees, 0).unwrap();
        let acc_trees = accuracy(&t.predict(x.view()).unwrap(), &y);
        assert!(acc_trees >= 0.9, "trees {acc_trees}");

        let s = train_classifier(x.view(), &y, &ClassifierSpec::softmax_regression(), 0).unwrap();
        let acc_lin = accuracy(&s.predict(x.view()).unwrap(), &y);
        assert!((acc_lin - 0.5).abs() < 0.15, "softmax {acc_lin}");
    }

    #[test]
    fn single_class() {
        let x = Array2::from_shape_fn((6, 2), |(i, j)| (i * j) as f64);
        let y = vec!["only".to_string(); 6];
        let t = train_classifier(x.view(), &y, &ClassifierSpec::default(), 0).unwrap();
        let probe = Array2::from_shape_fn((4, 2), |(i, _)| i as f64 * 100.0 - 50.0);
        assert!(t.predict(probe.view()).unwrap().iter().all(|l| l == "only"));
        assert_eq!(
            train_classifier(x.view(), &y, &ClassifierSpec::softmax_regression(), 0).unwrap_err(),
            ClassifierError::SingleClassSoftmax
        );
    }

    #[test]
    fn empty_and_invalid() {
        let x = Array2::zeros((0, 2));
        assert_eq!(
            train_classifier(x.view(), &[], &ClassifierSpec::default(), 0).unwrap_err(),
            ClassifierError::EmptyTrainingSet
        );
        let bad = ClassifierSpec::GradientBoostedTrees {
            n_trees: 0,
            max_depth: 3,
            shrinkage: 0.1,
            min_samples_leaf: 1,
        };
        assert!(matches!(
            train_classifier(x.view(), &[], &bad, 0),
            Err(ClassifierError::InvalidSpec(_))
        ));
    }

    #[test]
    fn predictions_are_deterministic() {
        let (x, y) = gaussian_pair(200, 1.0, 9);
        for spec in [
            ClassifierSpec::default(),
            ClassifierSpec::softmax_regression(),
        ] {
            let a = train_classifier(x.view(), &y, &spec, 5)
                .unwrap()
                .predict(x.view())
                .unwrap();
            let b = train_classifier(x.view(), &y, &spec, 5)
                .unwrap()
                .predict(x.view())
                .unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn spec_json_and_kinds() {
        let json = serde_json::to_value(ClassifierSpec::default()).unwrap();
        assert_eq!(json["kind"], "gradient-boosted-trees");
        assert_eq!(json["n_trees"], 100);
        let back: ClassifierSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, ClassifierSpec::default());
        assert_eq!(
            ClassifierSpec::from_kind("softmax"),
            Some(ClassifierSpec::softmax_regression())
        );
        assert_eq!(ClassifierSpec::from_kind("svm"), None);
    }
}
