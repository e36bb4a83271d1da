use ndarray::{ArrayView2, Zip};

/// Probabilities are clamped to `[BCE_CLAMP, 1 - BCE_CLAMP]` before taking logs.
pub const BCE_CLAMP: f64 = 1e-7;

/// Mean binary cross-entropy.
pub fn bce_loss(predictions: &[f64], labels: &[f64]) -> f64 {
    assert_eq!(predictions.len(), labels.len());
    if predictions.is_empty() {
        return 0.0;
    }
    let total: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = p.clamp(BCE_CLAMP, 1.0 - BCE_CLAMP);
            -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
        })
        .sum();
    total / predictions.len() as f64
}

/// Mean categorical cross-entropy of probability rows against one-hot rows.
pub fn cross_entropy_loss(probs: ArrayView2<'_, f64>, onehot: ArrayView2<'_, f64>) -> f64 {
    assert_eq!(probs.dim(), onehot.dim());
    if probs.nrows() == 0 {
        return 0.0;
    }
    let total = Zip::from(&probs)
        .and(&onehot)
        .fold(0.0, |acc, &p, &y| acc - y * p.max(BCE_CLAMP).ln());
    total / probs.nrows() as f64
}
