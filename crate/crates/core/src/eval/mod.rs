//! Downstream evaluation: metrics, classifiers, the split/augment/train/test
//! pipeline and the oversampler hyperparameter sweep.

pub mod classifier;
pub mod metrics;
mod pipeline;
mod sweep;

pub use classifier::{train_classifier, Classifier, ClassifierError, ClassifierSpec};
pub use metrics::{
    confusion, harmonic_f1, macro_f1, precision_recall_f1, ClassMetrics, ClassScore,
    ConfusionMatrix, MetricsError,
};
pub use pipeline::{
    run_pipeline, run_pipeline_tuned, BranchReport, PipelineError, PipelineReport, PipelineSeeds,
    SplitSizes,
};
pub use sweep::{
    sweep, SweepGrid, SweepOptions, SweepOutcome, TrialFactors, TrialResult, TrialStatus,
};

/// Serializes with object keys sorted and two-space indentation.
pub fn to_sorted_json<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    let value = sorted(serde_json::to_value(value)?);
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}

fn sorted(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}
