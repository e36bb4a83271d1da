use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("label `{0}` is not in the class order")]
    UnknownLabel(String),
    #[error("{truth} true labels but {predicted} predictions")]
    LengthMismatch { truth: usize, predicted: usize },
}

/// Rows are true classes, columns predicted classes, both in `labels` order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        self.counts.iter().map(|r| r[j]).sum()
    }
}

pub fn confusion<S: AsRef<str>, T: AsRef<str>>(
    y_true: &[S],
    y_pred: &[T],
    class_order: &[String],
) -> Result<ConfusionMatrix, MetricsError> {
    if y_true.len() != y_pred.len() {
        return Err(MetricsError::LengthMismatch {
            truth: y_true.len(),
            predicted: y_pred.len(),
        });
    }
    let index: HashMap<&str, usize> = class_order
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let lookup = |l: &str| {
        index
            .get(l)
            .copied()
            .ok_or_else(|| MetricsError::UnknownLabel(l.to_string()))
    };
    let k = class_order.len();
    let mut counts = vec![vec![0; k]; k];
    for (t, p) in y_true.iter().zip(y_pred) {
        counts[lookup(t.as_ref())?][lookup(p.as_ref())?] += 1;
    }
    Ok(ConfusionMatrix {
        labels: class_order.to_vec(),
        counts,
    })
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn harmonic_f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    /// Set when a 0/0 ratio was reported as 0.
    pub undefined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub classes: Vec<ClassScore>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

impl ClassMetrics {
    pub fn get(&self, label: &str) -> Option<&ClassScore> {
        self.classes.iter().find(|c| c.label == label)
    }
}

pub fn precision_recall_f1(cm: &ConfusionMatrix) -> ClassMetrics {
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            (0.0, true)
        } else {
            (num as f64 / den as f64, false)
        }
    };
    let classes: Vec<ClassScore> = cm
        .labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let tp = cm.counts[i][i];
            let (precision, p_undef) = ratio(tp, cm.col_sum(i));
            let (recall, r_undef) = ratio(tp, cm.row_sum(i));
            ClassScore {
                label: label.clone(),
                precision,
                recall,
                f1: harmonic_f1(precision, recall),
                support: cm.row_sum(i),
                undefined: p_undef || r_undef || precision + recall == 0.0,
            }
        })
        .collect();
    let k = classes.len().max(1) as f64;
    ClassMetrics {
        macro_precision: classes.iter().map(|c| c.precision).sum::<f64>() / k,
        macro_recall: classes.iter().map(|c| c.recall).sum::<f64>() / k,
        macro_f1: classes.iter().map(|c| c.f1).sum::<f64>() / k,
        classes,
    }
}

/// Shortcut for the macro-averaged F1 of a prediction.
pub fn macro_f1<S: AsRef<str>, T: AsRef<str>>(
    y_true: &[S],
    y_pred: &[T],
    class_order: &[String],
) -> Result<f64, MetricsError> {
    Ok(precision_recall_f1(&confusion(y_true, y_pred, class_order)?).macro_f1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn order(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn hand_counted_matrix() {
        let cm = confusion(&["a", "a", "b"], &["a", "b", "b"], &order(&["a", "b"])).unwrap();
        assert_eq!(cm.counts, vec![vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn perfect_prediction_is_diagonal() {
        let y: Vec<&str> = ["a"; 5].into_iter().chain(["b"; 5]).collect();
        let cm = confusion(&y, &y, &order(&["a", "b"])).unwrap();
        assert_eq!(cm.counts, vec![vec![5, 0], vec![0, 5]]);
        let m = precision_recall_f1(&cm);
        for c in &m.classes {
            assert_eq!((c.precision, c.recall, c.f1), (1.0, 1.0, 1.0));
            assert!(!c.undefined);
        }
        assert_eq!(m.macro_f1, 1.0);
    }

    #[test]
    fn empty_inputs() {
        let empty: [&str; 0] = [];
        let cm = confusion(&empty, &empty, &order(&["a", "b"])).unwrap();
        assert_eq!(cm.total(), 0);
        let m = precision_recall_f1(&cm);
        assert!(m.classes.iter().all(|c| c.undefined && c.f1 == 0.0));
    }

    #[test]
    fn errors() {
        assert_eq!(
            confusion(&["a"], &["a", "b"], &order(&["a", "b"])).unwrap_err(),
            MetricsError::LengthMismatch {
                truth: 1,
                predicted: 2
            }
        );
        assert_eq!(
            confusion(&["a"], &["z"], &order(&["a"])).unwrap_err(),
            MetricsError::UnknownLabel("z".into())
        );
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn reported_table_pairs() {
        assert!((harmonic_f1(0.447, 0.246) - 0.318).abs() <= 0.0015);
        assert!((harmonic_f1(0.647, 0.730) - 0.686).abs() <= 0.0005);
        assert_eq!(harmonic_f1(0.0, 0.0), 0.0);
    }

    #[test]
    fn never_predicted_class_is_flagged() {
        let cm = confusion(&["a", "b"], &["a", "a"], &order(&["a", "b"])).unwrap();
        let m = precision_recall_f1(&cm);
        let b = m.get("b").unwrap();
        assert!(b.undefined);
        assert_eq!((b.precision, b.recall, b.f1), (0.0, 0.0, 0.0));
        assert_eq!(m.get("a").unwrap().precision, 0.5);
    }

    proptest! {
        #[test]
        fn metric_identities(pairs in prop::collection::vec((0usize..4, 0usize..4), 0..200)) {
            let labels = order(&["a", "b", "c", "d"]);
            let t: Vec<&str> = pairs.iter().map(|(t, _)| labels[*t].as_str()).collect();
            let p: Vec<&str> = pairs.iter().map(|(_, p)| labels[*p].as_str()).collect();
            let cm = confusion(&t, &p, &labels).unwrap();
            prop_assert_eq!(cm.total(), pairs.len());
            let m = precision_recall_f1(&cm);
            prop_assert_eq!(m.classes.iter().map(|c| c.support).sum::<usize>(), pairs.len());
            for c in &m.classes {
                for v in [c.precision, c.recall, c.f1] {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
                if c.precision + c.recall > 0.0 {
                    let f = 2.0 * c.precision * c.recall / (c.precision + c.recall);
                    prop_assert!((c.f1 - f).abs() < 1e-12);
                }
            }
        }
    }
}
