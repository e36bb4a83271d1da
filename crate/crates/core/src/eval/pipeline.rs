use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::classifier::{train_classifier, Classifier, ClassifierError, ClassifierSpec};
use super::metrics::{confusion, precision_recall_f1, ClassMetrics, ConfusionMatrix, MetricsError};
use crate::data::{stratified_split, DataError, Dataset, FeatureScaler, SplitSpec};
use crate::gan::GanConfig;
use crate::resample::{fit_resample, ClassTrainLog, ResampleError, ResamplePlan};
use crate::seed::{self, stream};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("split: {0}")]
    Split(#[source] DataError),
    #[error("scaling: {0}")]
    Scale(#[source] DataError),
    #[error("augmentation: {0}")]
    Resample(#[source] ResampleError),
    #[error("{branch} classifier: {source}")]
    Classifier {
        branch: &'static str,
        #[source]
        source: ClassifierError,
    },
    #[error("metrics: {0}")]
    Metrics(#[from] MetricsError),
    #[error("no classifier candidates given")]
    NoCandidates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineSeeds {
    pub split: u64,
    pub gan: u64,
    pub classifier: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
    pub augmented_train: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub classifier: ClassifierSpec,
    pub validation_macro_f1: f64,
    pub test: ClassMetrics,
    pub confusion: ConfusionMatrix,
}

/// Baseline vs. augmented scores on one shared test split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub classes: Vec<String>,
    pub baseline: BranchReport,
    pub augmented: BranchReport,
    /// The oversampler configuration, minus `n_jobs` (which never affects
    /// results).
    pub gan_config: serde_json::Value,
    pub split: SplitSpec,
    pub seeds: PipelineSeeds,
    pub sizes: SplitSizes,
    pub plan: ResamplePlan,
    pub train_logs: Vec<ClassTrainLog>,
}

impl PipelineReport {
    pub fn to_json(&self) -> serde_json::Result<String> {
        super::to_sorted_json(self)
    }

    /// Methods as rows; precision, recall and F1 per class as columns.
    pub fn to_text(&self) -> String {
        let mut header = vec!["Method".to_string()];
        for metric in ["Precision", "Recall", "F1"] {
            for c in &self.classes {
                header.push(format!("{metric} (class {c})"));
            }
        }
        let row = |name: &str, m: &ClassMetrics| {
            let mut cells = vec![name.to_string()];
            for pick in [
                (|s: &super::ClassScore| s.precision) as fn(&super::ClassScore) -> f64,
                |s| s.recall,
                |s| s.f1,
            ] {
                for c in &self.classes {
                    cells.push(
                        m.get(c)
                            .map_or("-".to_string(), |s| format!("{:.3}", pick(s))),
                    );
                }
            }
            cells
        };
        let rows = [
            header,
            row("Baseline", &self.baseline.test),
            row("Augmented", &self.augmented.test),
        ];
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|j| rows.iter().map(|r| r[j].len()).max().unwrap())
            .collect();
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(j, (cell, &w))| {
                    if j == 0 {
                        format!("{cell:<w$}")
                    } else {
                        format!("{cell:>w$}")
                    }
                })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out.push_str(&format!(
            "\nvalidation macro-F1: baseline {:.4}, augmented {:.4}\n",
            self.baseline.validation_macro_f1, self.augmented.validation_macro_f1
        ));
        out
    }
}

/// The test partition. Its rows are only reachable through [`HeldOut::score`].
pub(crate) struct HeldOut(Dataset);

impl HeldOut {
    fn score(
        &self,
        model: &Classifier,
        classes: &[String],
    ) -> Result<(ClassMetrics, ConfusionMatrix), PipelineError> {
        let pred = model.predict(self.0.features().view()).map_err(|source| {
            PipelineError::Classifier {
                branch: "test",
                source,
            }
        })?;
        let cm = confusion(self.0.target(), &pred, classes)?;
        Ok((precision_recall_f1(&cm), cm))
    }

    fn len(&self) -> usize {
        self.0.n_samples()
    }
}

/// Step 1: split, then scale every partition with a scaler fitted on train.
pub(crate) struct Prepared {
    pub classes: Vec<String>,
    pub train: Dataset,
    pub val: Dataset,
    pub test: HeldOut,
}

pub(crate) fn prepare(dataset: &Dataset, split: &SplitSpec) -> Result<Prepared, PipelineError> {
    let parts = stratified_split(dataset, split).map_err(PipelineError::Split)?;
    let scaler = FeatureScaler::fit(parts.train.features().view());
    let scale = |d: &Dataset| scaler.transform_dataset(d).map_err(PipelineError::Scale);
    Ok(Prepared {
        classes: dataset.class_labels().to_vec(),
        train: scale(&parts.train)?,
        val: scale(&parts.val)?,
        test: HeldOut(scale(&parts.test)?),
    })
}

pub(crate) struct Fitted {
    pub model: Classifier,
    pub spec: ClassifierSpec,
    pub validation_macro_f1: f64,
}

/// Step 3: train each candidate, keep the best validation macro-F1 (earliest
/// candidate on ties).
pub(crate) fn fit_and_select(
    train: &Dataset,
    val: &Dataset,
    classes: &[String],
    candidates: &[ClassifierSpec],
    seed: u64,
    branch: &'static str,
) -> Result<Fitted, PipelineError> {
    let mut best: Option<Fitted> = None;
    for spec in candidates {
        let err = |source| PipelineError::Classifier { branch, source };
        let model =
            train_classifier(train.features().view(), train.target(), spec, seed).map_err(err)?;
        let score = validation_score(&model, val.features().view(), val.target(), classes)
            .map_err(|e| match e {
                PipelineError::Classifier { source, .. } => {
                    PipelineError::Classifier { branch, source }
                }
                other => other,
            })?;
        if best.as_ref().is_none_or(|b| score > b.validation_macro_f1) {
            best = Some(Fitted {
                model,
                spec: spec.clone(),
                validation_macro_f1: score,
            });
        }
    }
    best.ok_or(PipelineError::NoCandidates)
}

fn validation_score(
    model: &Classifier,
    x: ArrayView2<'_, f64>,
    y: &[String],
    classes: &[String],
) -> Result<f64, PipelineError> {
    let pred = model
        .predict(x)
        .map_err(|source| PipelineError::Classifier {
            branch: "validation",
            source,
        })?;
    Ok(precision_recall_f1(&confusion(y, &pred, classes)?).macro_f1)
}

pub(crate) fn classifier_seed(split: &SplitSpec) -> u64 {
    seed::derive(split.seed, stream::CLASSIFIER)
}

pub(crate) fn config_echo(config: &GanConfig) -> serde_json::Value {
    let mut v = serde_json::to_value(config).expect("config serializes");
    if let Some(map) = v.as_object_mut() {
        map.remove("n_jobs");
    }
    v
}

pub fn run_pipeline(
    dataset: &Dataset,
    gan_config: &GanConfig,
    split: &SplitSpec,
    spec: &ClassifierSpec,
) -> Result<PipelineReport, PipelineError> {
    run_pipeline_tuned(dataset, gan_config, split, std::slice::from_ref(spec))
}

/// Like [`run_pipeline`], choosing among several classifier settings by
/// validation macro-F1 separately for each branch.
pub fn run_pipeline_tuned(
    dataset: &Dataset,
    gan_config: &GanConfig,
    split: &SplitSpec,
    candidates: &[ClassifierSpec],
) -> Result<PipelineReport, PipelineError> {
    if candidates.is_empty() {
        return Err(PipelineError::NoCandidates);
    }
    let prepared = prepare(dataset, split)?;
    let classes = &prepared.classes;

    // step 2
    let resampled = fit_resample(&prepared.train, gan_config).map_err(PipelineError::Resample)?;
    let augmented_train = &resampled.balanced.dataset;

    // step 3
    let seed = classifier_seed(split);
    let base = fit_and_select(
        &prepared.train,
        &prepared.val,
        classes,
        candidates,
        seed,
        "baseline",
    )?;
    let aug = fit_and_select(
        augmented_train,
        &prepared.val,
        classes,
        candidates,
        seed,
        "augmented",
    )?;

    // step 4
    let (base_metrics, base_cm) = prepared.test.score(&base.model, classes)?;
    let (aug_metrics, aug_cm) = prepared.test.score(&aug.model, classes)?;

    Ok(PipelineReport {
        classes: classes.clone(),
        baseline: BranchReport {
            classifier: base.spec,
            validation_macro_f1: base.validation_macro_f1,
            test: base_metrics,
            confusion: base_cm,
        },
        augmented: BranchReport {
            classifier: aug.spec,
            validation_macro_f1: aug.validation_macro_f1,
            test: aug_metrics,
            confusion: aug_cm,
        },
        gan_config: config_echo(gan_config),
        split: *split,
        seeds: PipelineSeeds {
            split: split.seed,
            gan: gan_config.random_seed,
            classifier: seed,
        },
        sizes: SplitSizes {
            train: prepared.train.n_samples(),
            val: prepared.val.n_samples(),
            test: prepared.test.len(),
            augmented_train: augmented_train.n_samples(),
        },
        plan: resampled.plan,
        train_logs: resampled.logs,
    })
}
