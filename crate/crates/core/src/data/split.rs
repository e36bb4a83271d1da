use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{DataError, Dataset};
use crate::seed;

/// Train/validation/test fractions plus the shuffle seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub test_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.6,
            val_fraction: 0.2,
            test_fraction: 0.2,
            seed: 42,
        }
    }
}

impl SplitSpec {
    pub fn new(train: f64, val: f64, test: f64, seed: u64) -> Result<Self, DataError> {
        let spec = Self {
            train_fraction: train,
            val_fraction: val,
            test_fraction: test,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        let fractions = self.fractions();
        if fractions
            .iter()
            .any(|f| !(f.is_finite() && *f > 0.0 && *f < 1.0))
        {
            return Err(DataError::InvalidSplit(format!(
                "each fraction must lie in (0, 1), got {fractions:?}"
            )));
        }
        let total: f64 = fractions.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(DataError::InvalidSplit(format!(
                "fractions must sum to 1, got {total}"
            )));
        }
        Ok(())
    }

    pub fn fractions(&self) -> [f64; 3] {
        [self.train_fraction, self.val_fraction, self.test_fraction]
    }
}

/// Row indices of each partition, ascending within a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Split {
    pub train: Dataset,
    pub val: Dataset,
    pub test: Dataset,
}

/// Largest-remainder apportionment of `n` items over `fractions`, with every
/// partition guaranteed at least one item when `n >= fractions.len()`.
///
/// Remainder ties go to the earlier partition.
pub(crate) fn apportion(n: usize, fractions: &[f64; 3]) -> [usize; 3] {
    const TIE: f64 = 1e-9;
    let quotas = fractions.map(|f| f * n as f64);
    let mut counts = quotas.map(|q| q.floor() as usize);
    let assigned: usize = counts.iter().sum();
    let mut leftover = n.saturating_sub(assigned);

    let mut order = [0usize, 1, 2];
    // stable sort keeps partition order among equal remainders
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        if (ra - rb).abs() <= TIE {
            std::cmp::Ordering::Equal
        } else {
            rb.partial_cmp(&ra).unwrap()
        }
    });
    for &k in order.iter().cycle() {
        if leftover == 0 {
            break;
        }
        counts[k] += 1;
        leftover -= 1;
    }

    // Guarantee one sample per partition by borrowing from the largest.
    for k in 0..3 {
        if counts[k] == 0 {
            let donor = (0..3)
                .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
                .unwrap();
            if counts[donor] > 1 {
                counts[donor] -= 1;
                counts[k] += 1;
            }
        }
    }
    counts
}

/// Stratified three-way split. Each class is shuffled with a seeded stream and
/// cut according to [`apportion`].
pub fn stratified_split_indices(
    dataset: &Dataset,
    spec: &SplitSpec,
) -> Result<SplitIndices, DataError> {
    spec.validate()?;
    let fractions = spec.fractions();
    let mut rng = seed::rng(spec.seed);
    let mut out = SplitIndices {
        train: Vec::new(),
        val: Vec::new(),
        test: Vec::new(),
    };
    for label in dataset.class_labels() {
        let mut rows = dataset.indices_of(label);
        if rows.len() < 3 {
            return Err(DataError::ClassTooSmall {
                label: label.clone(),
                count: rows.len(),
            });
        }
        rows.shuffle(&mut rng);
        let [n_train, n_val, _] = apportion(rows.len(), &fractions);
        out.train.extend_from_slice(&rows[..n_train]);
        out.val.extend_from_slice(&rows[n_train..n_train + n_val]);
        out.test.extend_from_slice(&rows[n_train + n_val..]);
    }
    out.train.sort_unstable();
    out.val.sort_unstable();
    out.test.sort_unstable();
    Ok(out)
}

pub fn stratified_split(dataset: &Dataset, spec: &SplitSpec) -> Result<Split, DataError> {
    let idx = stratified_split_indices(dataset, spec)?;
    Ok(Split {
        train: dataset.select_rows(&idx.train),
        val: dataset.select_rows(&idx.val),
        test: dataset.select_rows(&idx.test),
    })
}
