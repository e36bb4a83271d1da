use ndarray::{Array2, ArrayView2, Axis, Zip};
use serde::{Deserialize, Serialize};

/// Scale of the self-normalizing exponential linear unit.
pub const SELU_LAMBDA: f64 = 1.050_700_987_355_480_5;
/// Negative-branch coefficient of the self-normalizing exponential linear unit.
pub const SELU_ALPHA: f64 = 1.673_263_242_354_377_2;

// Largest double strictly below 1. Saturated sigmoid/tanh outputs are pinned
// here so the open-interval guarantees hold for every finite input.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;
const ABOVE_ZERO: f64 = f64::MIN_POSITIVE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Selu,
    Sigmoid,
    Tanh,
    Linear,
    Softmax,
}

impl std::str::FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "selu" => Ok(Self::Selu),
            "sigmoid" => Ok(Self::Sigmoid),
            "tanh" => Ok(Self::Tanh),
            "linear" => Ok(Self::Linear),
            "softmax" => Ok(Self::Softmax),
            other => Err(format!("unknown activation `{other}`")),
        }
    }
}

impl std::fmt::Display for Activation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Selu => "selu",
            Self::Sigmoid => "sigmoid",
            Self::Tanh => "tanh",
            Self::Linear => "linear",
            Self::Softmax => "softmax",
        };
        f.write_str(name)
    }
}

pub fn selu(x: f64) -> f64 {
    if x > 0.0 {
        SELU_LAMBDA * x
    } else {
        SELU_LAMBDA * SELU_ALPHA * x.exp_m1()
    }
}

pub fn selu_grad(x: f64) -> f64 {
    if x > 0.0 {
        SELU_LAMBDA
    } else {
        SELU_LAMBDA * SELU_ALPHA * x.exp()
    }
}

pub fn sigmoid(x: f64) -> f64 {
    let s = if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    };
    s.clamp(ABOVE_ZERO, BELOW_ONE)
}

fn bounded_tanh(x: f64) -> f64 {
    x.tanh().clamp(-BELOW_ONE, BELOW_ONE)
}

impl Activation {
    pub(crate) fn apply(self, z: ArrayView2<'_, f64>) -> Array2<f64> {
        match self {
            Self::Selu => z.mapv(selu),
            Self::Sigmoid => z.mapv(sigmoid),
            Self::Tanh => z.mapv(bounded_tanh),
            Self::Linear => z.to_owned(),
            Self::Softmax => {
                let mut out = z.to_owned();
                for mut row in out.axis_iter_mut(Axis(0)) {
                    let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
                    row.mapv_inplace(|v| (v - max).exp());
                    let sum = row.sum();
                    row.mapv_inplace(|v| v / sum);
                }
                out
            }
        }
    }

    /// Pulls an output gradient back through the activation:
    /// returns dL/dz given dL/da, the pre-activation `z` and output `a`.
    pub(crate) fn backprop(
        self,
        grad_out: ArrayView2<'_, f64>,
        z: ArrayView2<'_, f64>,
        a: ArrayView2<'_, f64>,
    ) -> Array2<f64> {
        match self {
            Self::Linear => grad_out.to_owned(),
            Self::Selu => Zip::from(&grad_out)
                .and(&z)
                .map_collect(|&g, &z| g * selu_grad(z)),
            Self::Sigmoid => Zip::from(&grad_out)
                .and(&a)
                .map_collect(|&g, &a| g * a * (1.0 - a)),
            Self::Tanh => Zip::from(&grad_out)
                .and(&a)
                .map_collect(|&g, &a| g * (1.0 - a * a)),
            Self::Softmax => {
                // row-wise Jacobian-vector product: s * (g - <g, s>)
                let mut out = grad_out.to_owned();
                for (mut row, s) in out.axis_iter_mut(Axis(0)).zip(a.axis_iter(Axis(0))) {
                    let dot = row.dot(&s);
                    Zip::from(&mut row)
                        .and(&s)
                        .for_each(|g, &s| *g = s * (*g - dot));
                }
                out
            }
        }
    }
}
