//! Tabular datasets: ingestion, scaling and stratified splitting.

mod csv_io;
mod dataset;
mod scaler;
mod split;

pub use csv_io::{load_csv, read_csv, write_csv, write_csv_with_column};
pub(crate) use dataset::ordered_counts;
pub use dataset::{class_counts, Dataset};
pub use scaler::{fit_scaler, FeatureRange, FeatureScaler};
pub use split::{stratified_split, stratified_split_indices, Split, SplitIndices, SplitSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("target column `{0}` not found in header")]
    MissingTargetColumn(String),
    #[error("row {row}, column `{column}`: `{value}` is not a finite number")]
    NonNumericFeatureCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row} has {found} fields, header has {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dataset has no data rows")]
    EmptyDataset,
    #[error("dataset needs at least one feature column")]
    NoFeatures,
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
    #[error("{rows} feature rows but {labels} target labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("feature matrix contains a non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("expected {expected} feature columns, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("class `{label}` has {count} samples; at least 3 are needed to split")]
    ClassTooSmall { label: String, count: usize },
    #[error("invalid split fractions: {0}")]
    InvalidSplit(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
