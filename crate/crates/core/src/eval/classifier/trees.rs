use ndarray::ArrayView2;

use super::softmax::argmax;
use super::{encode_labels, ClassifierError};

/// Bins per feature for split search.
pub const MAX_BINS: usize = 256;
const L2: f64 = 1e-3;
const MIN_GAIN: f64 = 1e-12;

/// Cut points of one feature; bin `b` holds values `v` with
/// `cuts[b-1] < v <= cuts[b]`.
#[derive(Debug, Clone)]
struct FeatureBins {
    cuts: Vec<f64>,
}

impl FeatureBins {
    fn fit(column: impl Iterator<Item = f64>) -> Self {
        let mut values: Vec<f64> = column.collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let cuts = if values.len() <= MAX_BINS {
            values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
        } else {
            let n = values.len();
            let mut cuts: Vec<f64> = (1..MAX_BINS)
                .map(|q| values[q * n / MAX_BINS - 1])
                .collect();
            cuts.dedup();
            cuts
        };
        Self { cuts }
    }

    fn bin(&self, v: f64) -> u8 {
        self.cuts.partition_point(|&c| c < v) as u8
    }

    fn n_bins(&self) -> usize {
        self.cuts.len() + 1
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, row: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if row[feature] <= threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }
}

struct Grower<'a> {
    bins: &'a [Vec<u8>],
    features: &'a [FeatureBins],
    grad: &'a [f64],
    hess: &'a [f64],
    max_depth: usize,
    min_leaf: usize,
    leaf_scale: f64,
    nodes: Vec<Node>,
}

#[derive(Clone, Copy, Default)]
struct Bucket {
    g: f64,
    h: f64,
    n: usize,
}

impl Grower<'_> {
    fn grow(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let (g, h) = rows.iter().fold((0.0, 0.0), |(g, h), &i| {
            (g + self.grad[i], h + self.hess[i])
        });
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf(-self.leaf_scale * g / (h + L2)));
        if depth >= self.max_depth || rows.len() < 2 * self.min_leaf {
            return id;
        }
        let Some((feature, bin)) = self.best_split(rows, g, h) else {
            return id;
        };
        let column = &self.bins[feature];
        let mut split = 0;
        for k in 0..rows.len() {
            if column[rows[k]] as usize <= bin {
                rows.swap(k, split);
                split += 1;
            }
        }
        let (l_rows, r_rows) = rows.split_at_mut(split);
        // keep row order canonical so sums are reproducible
        l_rows.sort_unstable();
        r_rows.sort_unstable();
        let left = self.grow(l_rows, depth + 1);
        let right = self.grow(r_rows, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            threshold: self.features[feature].cuts[bin],
            left,
            right,
        };
        id
    }

    fn best_split(&self, rows: &[usize], g: f64, h: f64) -> Option<(usize, usize)> {
        let parent = g * g / (h + L2);
        let mut best: Option<(f64, usize, usize)> = None;
        for (f, fb) in self.features.iter().enumerate() {
            if fb.n_bins() < 2 {
                continue;
            }
            let mut hist = vec![Bucket::default(); fb.n_bins()];
            let column = &self.bins[f];
            for &i in rows {
                let b = &mut hist[column[i] as usize];
                b.g += self.grad[i];
                b.h += self.hess[i];
                b.n += 1;
            }
            let mut left = Bucket::default();
            for (bin, bucket) in hist[..fb.n_bins() - 1].iter().enumerate() {
                left.g += bucket.g;
                left.h += bucket.h;
                left.n += bucket.n;
                let right_n = rows.len() - left.n;
                if left.n < self.min_leaf || right_n < self.min_leaf {
                    continue;
                }
                let (rg, rh) = (g - left.g, h - left.h);
                let gain = left.g * left.g / (left.h + L2) + rg * rg / (rh + L2) - parent;
                if gain > MIN_GAIN && best.is_none_or(|(b, _, _)| gain > b) {
                    best = Some((gain, f, bin));
                }
            }
        }
        best.map(|(_, f, b)| (f, b))
    }
}

/// Multiclass gradient boosting on log-loss with depth-limited regression
/// trees and histogram split search.
#[derive(Debug, Clone)]
pub struct GradientBoostedTrees {
    classes: Vec<String>,
    n_features: usize,
    base: Vec<f64>,
    /// `rounds[r][k]` is round `r`'s tree for class `k`.
    rounds: Vec<Vec<Tree>>,
    shrinkage: f64,
}

impl GradientBoostedTrees {
    pub fn fit(
        x: ArrayView2<'_, f64>,
        y: &[String],
        n_trees: usize,
        max_depth: usize,
        shrinkage: f64,
        min_samples_leaf: usize,
    ) -> Self {
        let (classes, codes) = encode_labels(y);
        let (n, d) = x.dim();
        let k = classes.len();
        let mut model = Self {
            classes,
            n_features: d,
            base: vec![0.0; k],
            rounds: Vec::new(),
            shrinkage,
        };
        if k < 2 {
            return model;
        }

        let mut prior = vec![0.0; k];
        for &c in &codes {
            prior[c] += 1.0;
        }
        model.base = prior.iter().map(|&p| (p / n as f64).ln()).collect();

        let features: Vec<FeatureBins> = x
            .columns()
            .into_iter()
            .map(|c| FeatureBins::fit(c.iter().copied()))
            .collect();
        let bins: Vec<Vec<u8>> = x
            .columns()
            .into_iter()
            .zip(&features)
            .map(|(c, fb)| c.iter().map(|&v| fb.bin(v)).collect())
            .collect();

        let mut scores: Vec<Vec<f64>> = vec![model.base.clone(); n];
        let mut probs = vec![vec![0.0; k]; n];
        let leaf_scale = (k as f64 - 1.0) / k as f64;
        for _ in 0..n_trees {
            for (s, p) in scores.iter().zip(probs.iter_mut()) {
                softmax_into(s, p);
            }
            let mut round = Vec::with_capacity(k);
            for class in 0..k {
                let grad: Vec<f64> = (0..n)
                    .map(|i| probs[i][class] - f64::from(u8::from(codes[i] == class)))
                    .collect();
                let hess: Vec<f64> = (0..n)
                    .map(|i| probs[i][class] * (1.0 - probs[i][class]))
                    .collect();
                let mut grower = Grower {
                    bins: &bins,
                    features: &features,
                    grad: &grad,
                    hess: &hess,
                    max_depth,
                    min_leaf: min_samples_leaf,
                    leaf_scale,
                    nodes: Vec::new(),
                };
                let mut rows: Vec<usize> = (0..n).collect();
                grower.grow(&mut rows, 0);
                let tree = Tree {
                    nodes: grower.nodes,
                };
                for (i, s) in scores.iter_mut().enumerate() {
                    let row: Vec<f64> = x.row(i).to_vec();
                    s[class] += shrinkage * tree.predict(&row);
                }
                round.push(tree);
            }
            model.rounds.push(round);
        }
        model
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<String>, ClassifierError> {
        if x.ncols() != self.n_features {
            return Err(ClassifierError::DimensionMismatch {
                expected: self.n_features,
                found: x.ncols(),
            });
        }
        Ok(x.rows()
            .into_iter()
            .map(|row| {
                let row = row.to_vec();
                let mut s = self.base.clone();
                for round in &self.rounds {
                    for (k, tree) in round.iter().enumerate() {
                        s[k] += self.shrinkage * tree.predict(&row);
                    }
                }
                self.classes[argmax(s.into_iter())].clone()
            })
            .collect())
    }
}

fn softmax_into(scores: &[f64], out: &mut [f64]) {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &s) in out.iter_mut().zip(scores) {
        *o = (s - max).exp();
        sum += *o;
    }
    out.iter_mut().for_each(|o| *o /= sum);
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn few_distinct_values_get_midpoint_cuts() {
        let fb = FeatureBins::fit([3.0, 1.0, 2.0, 1.0].into_iter());
        assert_eq!(fb.cuts, vec![1.5, 2.5]);
        assert_eq!(fb.bin(1.0), 0);
        assert_eq!(fb.bin(1.5), 0);
        assert_eq!(fb.bin(2.0), 1);
        assert_eq!(fb.bin(9.0), 2);
    }

    #[test]
    fn many_values_are_capped_at_max_bins() {
        let fb = FeatureBins::fit((0..10_000).map(|i| i as f64));
        assert!(fb.n_bins() <= MAX_BINS);
        assert!(fb.n_bins() > MAX_BINS / 2);
        // roughly equal-frequency bins
        assert_eq!(fb.bin(0.0), 0);
        assert_eq!(fb.bin(9_999.0) as usize, fb.n_bins() - 1);
    }

    #[test]
    fn threshold_split_separates_one_feature() {
        let x = Array2::from_shape_fn((40, 1), |(i, _)| i as f64);
        let y: Vec<String> = (0..40)
            .map(|i| if i < 20 { "lo" } else { "hi" }.to_string())
            .collect();
        let m = GradientBoostedTrees::fit(x.view(), &y, 10, 1, 0.5, 1);
        assert_eq!(m.predict(x.view()).unwrap(), y);
        match &m.rounds[0][0].nodes[0] {
            Node::Split { threshold, .. } => assert_eq!(*threshold, 19.5),
            Node::Leaf(_) => panic!("expected a split"),
        }
    }

    #[test]
    fn width_mismatch() {
        let x = Array2::from_shape_fn((10, 2), |(i, j)| (i + j) as f64);
        let y: Vec<String> = (0..10).map(|i| (i % 2).to_string()).collect();
        let m = GradientBoostedTrees::fit(x.view(), &y, 2, 2, 0.1, 1);
        assert!(m.predict(Array2::zeros((1, 3)).view()).is_err());
    }
}
