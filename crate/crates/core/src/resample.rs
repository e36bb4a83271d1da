//! Equalizes class counts by sampling a per-class GAN.
//!
//! Original rows are kept verbatim and come first; synthetic rows follow,
//! grouped by class in `class_labels` order. Synthetic values are not rounded,
//! so integer-coded features come back fractional.

use std::collections::HashSet;

use ndarray::{Array2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{ordered_counts, DataError, Dataset, FeatureScaler};
use crate::gan::{build_gan, generate, train_gan, GanConfig, GanError, MinorClasses, TrainLog};
use crate::seed::{self, stream};

#[derive(Debug, Error)]
pub enum ResampleError {
    #[error("class `{0}` is not present in the training labels")]
    UnknownClass(String),
    #[error("class `{0}` already has the majority count and cannot be oversampled")]
    MajorityInMinorList(String),
    #[error("cannot plan over an empty label set")]
    EmptyLabels,
    #[error(transparent)]
    Gan(#[from] GanError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPlan {
    pub label: String,
    pub count: usize,
    pub deficit: usize,
    pub augment: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResamplePlan {
    pub majority_count: usize,
    pub classes: Vec<ClassPlan>,
}

impl ResamplePlan {
    pub fn augmented(&self) -> impl Iterator<Item = (usize, &ClassPlan)> {
        self.classes.iter().enumerate().filter(|(_, c)| c.augment)
    }

    pub fn total_deficit(&self) -> usize {
        self.augmented().map(|(_, c)| c.deficit).sum()
    }

    /// Fixed-width text table: class, count, deficit, augment.
    pub fn to_table(&self) -> String {
        let width = self
            .classes
            .iter()
            .map(|c| c.label.len())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = format!(
            "{:<width$}  {:>8}  {:>8}  augment\n",
            "class", "count", "deficit"
        );
        for c in &self.classes {
            out.push_str(&format!(
                "{:<width$}  {:>8}  {:>8}  {}\n",
                c.label,
                c.count,
                c.deficit,
                if c.augment { "yes" } else { "no" }
            ));
        }
        out
    }
}

/// Classes at the maximum count, and deficits for all others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eligibility {
    pub majority_count: usize,
    pub majority: Vec<String>,
    pub minority: Vec<(String, usize)>,
}

pub fn ties_and_eligibility(counts: &[(String, usize)]) -> Eligibility {
    let majority_count = counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
    let (majority, minority): (Vec<_>, Vec<_>) =
        counts.iter().partition(|(_, c)| *c == majority_count);
    Eligibility {
        majority_count,
        majority: majority.into_iter().map(|(l, _)| l.clone()).collect(),
        minority: minority
            .into_iter()
            .map(|(l, c)| (l.clone(), majority_count - c))
            .collect(),
    }
}

/// Plans deficits from labels. Class order is first appearance in `labels`.
pub fn plan(
    labels: &[String],
    minor_classes: &MinorClasses,
) -> Result<ResamplePlan, ResampleError> {
    if labels.is_empty() {
        return Err(ResampleError::EmptyLabels);
    }
    let mut counts: Vec<(String, usize)> = Vec::new();
    for l in labels {
        match counts.iter_mut().find(|(k, _)| k == l) {
            Some((_, c)) => *c += 1,
            None => counts.push((l.clone(), 1)),
        }
    }
    plan_from_counts(&counts, minor_classes)
}

pub(crate) fn plan_from_counts(
    counts: &[(String, usize)],
    minor_classes: &MinorClasses,
) -> Result<ResamplePlan, ResampleError> {
    let elig = ties_and_eligibility(counts);
    let requested: Option<HashSet<&str>> = match minor_classes {
        MinorClasses::All => None,
        MinorClasses::List(list) => {
            for l in list {
                if !counts.iter().any(|(k, _)| k == l) {
                    return Err(ResampleError::UnknownClass(l.clone()));
                }
                if elig.majority.contains(l) {
                    return Err(ResampleError::MajorityInMinorList(l.clone()));
                }
            }
            Some(list.iter().map(String::as_str).collect())
        }
    };
    let classes = counts
        .iter()
        .map(|(label, count)| {
            let below = *count < elig.majority_count;
            let wanted = requested
                .as_ref()
                .is_none_or(|r| r.contains(label.as_str()));
            let augment = below && wanted;
            ClassPlan {
                label: label.clone(),
                count: *count,
                deficit: if augment {
                    elig.majority_count - count
                } else {
                    0
                },
                augment,
            }
        })
        .collect();
    Ok(ResamplePlan {
        majority_count: elig.majority_count,
        classes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Original,
    Synthetic,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Original => "original",
            Self::Synthetic => "synthetic",
        }
    }
}

/// A dataset whose rows are tagged original or synthetic. The source class of
/// a row is its label.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedDataset {
    pub dataset: Dataset,
    pub origin: Vec<Origin>,
}

impl BalancedDataset {
    pub fn n_original(&self) -> usize {
        self.origin
            .iter()
            .filter(|o| **o == Origin::Original)
            .count()
    }

    pub fn origin_labels(&self) -> Vec<&'static str> {
        self.origin.iter().map(|o| o.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassTrainLog {
    pub class_label: String,
    pub log: TrainLog,
}

#[derive(Debug, Clone)]
pub struct Resampled {
    pub balanced: BalancedDataset,
    pub plan: ResamplePlan,
    pub logs: Vec<ClassTrainLog>,
    pub scaler: FeatureScaler,
}

/// Trains one GAN per planned class and appends exactly its deficit.
///
/// Class `i` (in `class_labels` order) trains from `seed::class_seed(random_seed, i)`,
/// so the output does not depend on `n_jobs`.
pub fn fit_resample(train: &Dataset, config: &GanConfig) -> Result<Resampled, ResampleError> {
    config.validate()?;
    let counts = ordered_counts(train);
    let plan = plan_from_counts(&counts, &config.minor_classes)?;
    let scaler = FeatureScaler::fit(train.features().view());

    if plan.total_deficit() == 0 {
        return Ok(Resampled {
            balanced: BalancedDataset {
                dataset: train.clone(),
                origin: vec![Origin::Original; train.n_samples()],
            },
            plan,
            logs: Vec::new(),
            scaler,
        });
    }

    for (_, c) in plan.augmented() {
        if c.count < 2 {
            return Err(GanError::DegenerateClass {
                label: c.label.clone(),
                count: c.count,
            }
            .into());
        }
    }

    let scaled = scaler.transform(train.features().view())?;
    let jobs: Vec<(usize, &crate::resample::ClassPlan)> = plan.augmented().collect();
    let work = |&(class_index, class): &(usize, &ClassPlan)| -> Result<_, ResampleError> {
        let rows = train.indices_of(&class.label);
        let samples = scaled.select(Axis(0), &rows);
        let class_seed = seed::class_seed(config.random_seed, class_index);
        let model = build_gan(config, train.n_features(), class.label.clone(), class_seed)?;
        let (model, log) = train_gan(model, samples.view(), config)?;
        let synthetic = generate(
            &model,
            class.deficit,
            seed::derive(class_seed, stream::SAMPLING),
        );
        let features = scaler.inverse_transform(synthetic.view())?;
        Ok((class.label.clone(), features, log))
    };

    let results: Vec<Result<_, ResampleError>> = if config.n_jobs == 1 {
        jobs.iter().map(work).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.n_jobs)
            .build()
            .map_err(|e| ResampleError::Pool(e.to_string()))?
            .install(|| jobs.par_iter().map(work).collect())
    };

    let mut blocks = Vec::with_capacity(results.len());
    let mut logs = Vec::with_capacity(results.len());
    for r in results {
        let (label, features, log) = r?;
        logs.push(ClassTrainLog {
            class_label: label.clone(),
            log,
        });
        blocks.push((label, features));
    }

    let n_synth: usize = blocks.iter().map(|(_, f)| f.nrows()).sum();
    let views: Vec<_> = blocks.iter().map(|(_, f)| f.view()).collect();
    let synth = if views.is_empty() {
        Array2::zeros((0, train.n_features()))
    } else {
        ndarray::concatenate(Axis(0), &views).expect("same width")
    };
    let synth_labels: Vec<String> = blocks
        .iter()
        .flat_map(|(l, f)| std::iter::repeat_n(l.clone(), f.nrows()))
        .collect();
    let dataset = train.append(&synth, &synth_labels)?;
    let mut origin = vec![Origin::Original; train.n_samples()];
    origin.extend(std::iter::repeat_n(Origin::Synthetic, n_synth));

    Ok(Resampled {
        balanced: BalancedDataset { dataset, origin },
        plan,
        logs,
        scaler,
    })
}
