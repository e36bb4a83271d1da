use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use super::{DataError, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureRange {
    pub min: f64,
    pub max: f64,
}

impl FeatureRange {
    pub fn is_constant(&self) -> bool {
        self.max <= self.min
    }
}

/// Per-feature affine map of `[min, max]` onto `[-1, 1]`.
///
/// Constant features map to 0 and invert to the constant. Values outside the
/// fitted range are allowed and land outside `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    ranges: Vec<FeatureRange>,
}

/// Records per-feature min/max. Panics on an empty matrix, which a [`Dataset`]
/// can never hold.
pub fn fit_scaler(dataset: &Dataset) -> FeatureScaler {
    FeatureScaler::fit(dataset.features().view())
}

impl FeatureScaler {
    pub fn fit(features: ArrayView2<'_, f64>) -> Self {
        assert!(features.nrows() > 0, "cannot fit a scaler on zero rows");
        let ranges = features
            .columns()
            .into_iter()
            .map(|col| {
                let (min, max) = col
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    });
                FeatureRange { min, max }
            })
            .collect();
        Self { ranges }
    }

    pub fn ranges(&self) -> &[FeatureRange] {
        &self.ranges
    }

    pub fn n_features(&self) -> usize {
        self.ranges.len()
    }

    pub fn transform(&self, features: ArrayView2<'_, f64>) -> Result<Array2<f64>, DataError> {
        self.check_width(features.ncols())?;
        let mut out = features.to_owned();
        for (mut col, r) in out.columns_mut().into_iter().zip(&self.ranges) {
            if r.is_constant() {
                col.fill(0.0);
            } else {
                let span = r.max - r.min;
                col.mapv_inplace(|v| 2.0 * (v - r.min) / span - 1.0);
            }
        }
        Ok(out)
    }

    pub fn inverse_transform(&self, scaled: ArrayView2<'_, f64>) -> Result<Array2<f64>, DataError> {
        self.check_width(scaled.ncols())?;
        let mut out = scaled.to_owned();
        for (mut col, r) in out.columns_mut().into_iter().zip(&self.ranges) {
            if r.is_constant() {
                col.fill(r.min);
            } else {
                let span = r.max - r.min;
                col.mapv_inplace(|s| (s + 1.0) / 2.0 * span + r.min);
            }
        }
        Ok(out)
    }

    /// Scales a dataset's features, keeping its labels and schema.
    pub fn transform_dataset(&self, dataset: &Dataset) -> Result<Dataset, DataError> {
        dataset.with_features(self.transform(dataset.features().view())?)
    }

    /// True when every element lies inside its feature's fitted range.
    pub fn contains(&self, features: ArrayView2<'_, f64>) -> bool {
        features.ncols() == self.ranges.len()
            && features.rows().into_iter().all(|row| {
                row.iter()
                    .zip(&self.ranges)
                    .all(|(&v, r)| v >= r.min && v <= r.max)
            })
    }

    fn check_width(&self, found: usize) -> Result<(), DataError> {
        if found != self.ranges.len() {
            return Err(DataError::DimensionMismatch {
                expected: self.ranges.len(),
                found,
            });
        }
        Ok(())
    }
}
