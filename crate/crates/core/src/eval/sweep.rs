use serde::{Deserialize, Serialize};

use super::classifier::ClassifierSpec;
use super::pipeline::{classifier_seed, fit_and_select, prepare, PipelineError};
use crate::data::{Dataset, SplitSpec};
use crate::gan::GanConfig;
use crate::resample::fit_resample;

/// Multiplicative factors applied to the base configuration. Every list
/// should start with the identity so the first trial is the base config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    /// Applied to both learning rates together.
    pub learning_rate_factors: Vec<f64>,
    /// Applied to every hidden width of both networks.
    pub layer_size_factors: Vec<f64>,
    pub max_iter_factors: Vec<usize>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            learning_rate_factors: vec![1.0, 0.1, 10.0],
            layer_size_factors: vec![1.0, 0.1, 10.0],
            max_iter_factors: vec![1, 2],
        }
    }
}

impl SweepGrid {
    pub fn single() -> Self {
        Self {
            learning_rate_factors: vec![1.0],
            layer_size_factors: vec![1.0],
            max_iter_factors: vec![1],
        }
    }

    pub fn len(&self) -> usize {
        self.learning_rate_factors.len()
            * self.layer_size_factors.len()
            * self.max_iter_factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in order: learning rate outermost, then layer size, then
    /// epochs.
    pub fn configs(&self, base: &GanConfig) -> Vec<(TrialFactors, GanConfig)> {
        let mut out = Vec::with_capacity(self.len());
        for &lr in &self.learning_rate_factors {
            for &size in &self.layer_size_factors {
                for &iters in &self.max_iter_factors {
                    let scale = |widths: &[usize]| -> Vec<usize> {
                        widths
                            .iter()
                            .map(|&w| ((w as f64 * size).round() as usize).max(1))
                            .collect()
                    };
                    let config = GanConfig {
                        generator_learning_rate: base.generator_learning_rate * lr,
                        discriminator_learning_rate: base.discriminator_learning_rate * lr,
                        generator_hidden_layer_sizes: scale(&base.generator_hidden_layer_sizes),
                        discriminator_hidden_layer_sizes: scale(
                            &base.discriminator_hidden_layer_sizes,
                        ),
                        max_iter: base.max_iter * iters,
                        ..base.clone()
                    };
                    let factors = TrialFactors {
                        learning_rate: lr,
                        layer_size: size,
                        max_iter: iters,
                    };
                    out.push((factors, config));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOptions {
    pub grid: SweepGrid,
    /// Caps the number of trials, taken in grid order. `Some(0)` is invalid.
    pub max_trials: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialFactors {
    pub learning_rate: f64,
    pub layer_size: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum TrialStatus {
    Ok { validation_macro_f1: f64 },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: usize,
    pub factors: TrialFactors,
    pub config: GanConfig,
    #[serde(flatten)]
    pub status: TrialStatus,
}

impl TrialResult {
    pub fn score(&self) -> Option<f64> {
        match self.status {
            TrialStatus::Ok {
                validation_macro_f1,
            } => Some(validation_macro_f1),
            TrialStatus::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// `None` when every trial failed.
    pub best: Option<(usize, GanConfig)>,
    pub trials: Vec<TrialResult>,
}

impl SweepOutcome {
    pub fn best_score(&self) -> Option<f64> {
        self.best
            .as_ref()
            .and_then(|(i, _)| self.trials[*i].score())
    }
}

/// Index of the highest score; the earliest wins ties.
pub(crate) fn select_best(scores: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.iter().enumerate() {
        if let Some(s) = *s {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Scores each grid point by the augmented branch's validation macro-F1.
/// The test split is never touched. Failing trials are recorded and skipped.
pub fn sweep(
    dataset: &Dataset,
    base: &GanConfig,
    split: &SplitSpec,
    spec: &ClassifierSpec,
    options: &SweepOptions,
) -> Result<SweepOutcome, PipelineError> {
    if options.max_trials == Some(0) {
        return Err(PipelineError::Resample(
            crate::resample::ResampleError::Gan(crate::gan::GanError::InvalidConfig(
                "max_trials must be at least 1".into(),
            )),
        ));
    }
    base.validate()
        .map_err(|e| PipelineError::Resample(e.into()))?;
    let prepared = prepare(dataset, split)?;
    let seed = classifier_seed(split);

    let mut grid = options.grid.configs(base);
    if let Some(cap) = options.max_trials {
        grid.truncate(cap);
    }

    let trials: Vec<TrialResult> = grid
        .into_iter()
        .enumerate()
        .map(|(index, (factors, config))| {
            let outcome = fit_resample(&prepared.train, &config)
                .map_err(PipelineError::Resample)
                .and_then(|r| {
                    fit_and_select(
                        &r.balanced.dataset,
                        &prepared.val,
                        &prepared.classes,
                        std::slice::from_ref(spec),
                        seed,
                        "augmented",
                    )
                });
            let status = match outcome {
                Ok(fitted) => TrialStatus::Ok {
                    validation_macro_f1: fitted.validation_macro_f1,
                },
                Err(e) => {
                    log::warn!("trial {index} failed: {e}");
                    TrialStatus::Failed {
                        error: e.to_string(),
                    }
                }
            };
            TrialResult {
                index,
                factors,
                config,
                status,
            }
        })
        .collect();

    let scores: Vec<Option<f64>> = trials.iter().map(TrialResult::score).collect();
    let best = select_best(&scores).map(|i| (i, trials[i].config.clone()));
    Ok(SweepOutcome { best, trials })
}
