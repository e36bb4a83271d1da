use super::{DenseNetwork, Gradients, NnError};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

/// Adam moment estimates for a fixed-size flat parameter vector.
///
/// Parameters are visited in [`DenseNetwork::params`] order when stepping a
/// network.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step: u64,
}

impl AdamState {
    pub fn new(n_params: usize, learning_rate: f64) -> Self {
        Self {
            learning_rate,
            beta1: ADAM_BETA1,
            beta2: ADAM_BETA2,
            epsilon: ADAM_EPSILON,
            first_moment: vec![0.0; n_params],
            second_moment: vec![0.0; n_params],
            step: 0,
        }
    }

    pub fn for_network(net: &DenseNetwork, learning_rate: f64) -> Self {
        Self::new(net.n_params(), learning_rate)
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn first_moment(&self) -> &[f64] {
        &self.first_moment
    }

    pub fn second_moment(&self) -> &[f64] {
        &self.second_moment
    }

    /// One bias-corrected Adam update of `params` in place.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<(), NnError> {
        if params.len() != self.first_moment.len() || grads.len() != params.len() {
            return Err(NnError::ShapeMismatch);
        }
        self.step += 1;
        let (c1, c2) = self.corrections();
        let coeffs = self.coefficients(c1, c2);
        update(
            params,
            grads,
            &mut self.first_moment,
            &mut self.second_moment,
            coeffs,
        );
        Ok(())
    }

    pub fn step_network(
        &mut self,
        net: &mut DenseNetwork,
        grads: &Gradients,
    ) -> Result<(), NnError> {
        if net.n_params() != self.first_moment.len() || grads.layers.len() != net.layers().len() {
            return Err(NnError::ShapeMismatch);
        }
        for (l, g) in net.layers().iter().zip(&grads.layers) {
            if l.weights.dim() != g.weights.dim() || l.bias.len() != g.bias.len() {
                return Err(NnError::ShapeMismatch);
            }
        }
        self.step += 1;
        let (c1, c2) = self.corrections();
        let coeffs = self.coefficients(c1, c2);
        let mut offset = 0;
        for (l, g) in net.layers_mut().iter_mut().zip(&grads.layers) {
            for (p, gp) in [
                (l.weights.as_slice_mut(), g.weights.as_slice()),
                (l.bias.as_slice_mut(), g.bias.as_slice()),
            ] {
                let (p, gp) = (
                    p.expect("owned arrays are contiguous"),
                    gp.expect("contiguous"),
                );
                let end = offset + p.len();
                update(
                    p,
                    gp,
                    &mut self.first_moment[offset..end],
                    &mut self.second_moment[offset..end],
                    coeffs,
                );
                offset = end;
            }
        }
        Ok(())
    }

    fn corrections(&self) -> (f64, f64) {
        let t = self.step as i32;
        (1.0 - self.beta1.powi(t), 1.0 - self.beta2.powi(t))
    }

    fn coefficients(&self, c1: f64, c2: f64) -> Coefficients {
        Coefficients {
            lr: self.learning_rate,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
            c1,
            c2,
        }
    }
}

#[derive(Clone, Copy)]
struct Coefficients {
    lr: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    c1: f64,
    c2: f64,
}

fn update(params: &mut [f64], grads: &[f64], m: &mut [f64], v: &mut [f64], k: Coefficients) {
    for (((p, &g), m), v) in params
        .iter_mut()
        .zip(grads)
        .zip(m.iter_mut())
        .zip(v.iter_mut())
    {
        *m = k.beta1 * *m + (1.0 - k.beta1) * g;
        *v = k.beta2 * *v + (1.0 - k.beta2) * g * g;
        let m_hat = *m / k.c1;
        let v_hat = *v / k.c2;
        *p -= k.lr * m_hat / (v_hat.sqrt() + k.epsilon);
    }
}
