//! Fixtures shared by the Criterion benchmarks in `benches/`.

use cigan_core::Dataset;
use ndarray::Array2;

/// Deterministic value in [-1, 1).
fn wobble(i: usize, j: usize) -> f64 {
    let x = ((i * 7919 + j * 104_729 + 13) as f64).sin() * 43_758.545_3;
    2.0 * (x - x.floor()) - 1.0
}

/// An `n x d` matrix inside the scaled feature box.
pub fn scaled_matrix(n: usize, d: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, d), |(i, j)| 0.9 * wobble(i, j))
}

/// Classes `c0..` with the given counts, shifted apart along each feature.
pub fn labelled(counts: &[usize], d: usize) -> Dataset {
    let n: usize = counts.iter().sum();
    let mut target = Vec::with_capacity(n);
    for (c, &k) in counts.iter().enumerate() {
        target.extend(std::iter::repeat_n(format!("c{c}"), k));
    }
    let x = Array2::from_shape_fn((n, d), |(i, j)| {
        let class: usize = target[i][1..].parse().unwrap();
        class as f64 + wobble(i, j)
    });
    let names = (0..d).map(|j| format!("f{j}")).collect();
    Dataset::new(x, target, names, "label").expect("fixture is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_requested_shape() {
        assert_eq!(scaled_matrix(5, 3).dim(), (5, 3));
        assert!(scaled_matrix(50, 4).iter().all(|v| v.abs() < 1.0));
        let ds = labelled(&[10, 3], 2);
        assert_eq!(ds.n_samples(), 13);
        assert_eq!(ds.class_labels(), ["c0", "c1"]);
    }
}
