use std::collections::{BTreeMap, HashMap, HashSet};

use ndarray::{Array2, ArrayView1, Axis};

use super::DataError;

/// A feature matrix paired with one class label per row.
///
/// Labels are opaque strings. `class_labels` lists the distinct labels in
/// order of first appearance and is recomputed whenever rows are selected.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Array2<f64>,
    target: Vec<String>,
    feature_names: Vec<String>,
    class_labels: Vec<String>,
    target_name: String,
    /// Column position of the target in the source header, so that written
    /// files keep the original layout.
    target_position: usize,
}

impl Dataset {
    /// Builds a dataset with the target placed after the last feature.
    pub fn new(
        features: Array2<f64>,
        target: Vec<String>,
        feature_names: Vec<String>,
        target_name: impl Into<String>,
    ) -> Result<Self, DataError> {
        let position = feature_names.len();
        Self::with_target_position(features, target, feature_names, target_name, position)
    }

    pub fn with_target_position(
        features: Array2<f64>,
        target: Vec<String>,
        feature_names: Vec<String>,
        target_name: impl Into<String>,
        target_position: usize,
    ) -> Result<Self, DataError> {
        let target_name = target_name.into();
        if features.nrows() != target.len() {
            return Err(DataError::LengthMismatch {
                rows: features.nrows(),
                labels: target.len(),
            });
        }
        if features.ncols() == 0 {
            return Err(DataError::NoFeatures);
        }
        if feature_names.len() != features.ncols() {
            return Err(DataError::DimensionMismatch {
                expected: features.ncols(),
                found: feature_names.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in feature_names.iter().chain(std::iter::once(&target_name)) {
            if !seen.insert(name.as_str()) {
                return Err(DataError::DuplicateColumn(name.clone()));
            }
        }
        if let Some(((row, col), _)) = features.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(DataError::NonFinite { row, col });
        }
        let class_labels = distinct_in_order(&target);
        let target_position = target_position.min(feature_names.len());
        Ok(Self {
            features,
            target,
            feature_names,
            class_labels,
            target_name,
            target_position,
        })
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn target_position(&self) -> usize {
        self.target_position
    }

    pub fn n_samples(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    /// Row indices of every sample labelled `label`, ascending.
    pub fn indices_of(&self, label: &str) -> Vec<usize> {
        self.target
            .iter()
            .enumerate()
            .filter(|(_, t)| t.as_str() == label)
            .map(|(i, _)| i)
            .collect()
    }

    /// Copies the given rows, in the given order, into a new dataset.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let features = self.features.select(Axis(0), rows);
        let target: Vec<String> = rows.iter().map(|&i| self.target[i].clone()).collect();
        let class_labels = distinct_in_order(&target);
        Dataset {
            features,
            target,
            feature_names: self.feature_names.clone(),
            class_labels,
            target_name: self.target_name.clone(),
            target_position: self.target_position,
        }
    }

    /// Same schema and labels, new feature values.
    pub fn with_features(&self, features: Array2<f64>) -> Result<Dataset, DataError> {
        if features.dim() != self.features.dim() {
            return Err(DataError::DimensionMismatch {
                expected: self.features.ncols(),
                found: features.ncols(),
            });
        }
        Dataset::with_target_position(
            features,
            self.target.clone(),
            self.feature_names.clone(),
            self.target_name.clone(),
            self.target_position,
        )
    }

    /// Appends rows sharing this dataset's schema.
    pub fn append(&self, features: &Array2<f64>, labels: &[String]) -> Result<Dataset, DataError> {
        if features.ncols() != self.n_features() {
            return Err(DataError::DimensionMismatch {
                expected: self.n_features(),
                found: features.ncols(),
            });
        }
        if features.nrows() != labels.len() {
            return Err(DataError::LengthMismatch {
                rows: features.nrows(),
                labels: labels.len(),
            });
        }
        let stacked = ndarray::concatenate(Axis(0), &[self.features.view(), features.view()])
            .expect("column counts checked above");
        let mut target = self.target.clone();
        target.extend_from_slice(labels);
        Dataset::with_target_position(
            stacked,
            target,
            self.feature_names.clone(),
            self.target_name.clone(),
            self.target_position,
        )
    }
}

fn distinct_in_order(target: &[String]) -> Vec<String> {
    let mut seen = HashSet::new();
    target
        .iter()
        .filter(|t| seen.insert(t.as_str()))
        .cloned()
        .collect()
}

/// Number of samples per class, keyed by label.
pub fn class_counts(dataset: &Dataset) -> BTreeMap<String, usize> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in dataset.target() {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// Class counts in `class_labels` order.
pub(crate) fn ordered_counts(dataset: &Dataset) -> Vec<(String, usize)> {
    let counts = class_counts(dataset);
    dataset
        .class_labels()
        .iter()
        .map(|l| (l.clone(), counts[l]))
        .collect()
}
