//! Adam with bias correction, over a fixed-order parameter list.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub struct AdamState {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub step: u64,
    m: Vec<Matrix>,
    v: Vec<Matrix>,
}

impl AdamState {
    pub fn new(lr: f64, shapes: &[(usize, usize)]) -> Self {
        AdamState {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step: 0,
            m: shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
            v: shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect(),
        }
    }

    pub fn for_params(lr: f64, params: &[Matrix]) -> Self {
        let shapes: Vec<_> = params.iter().map(|p| p.shape()).collect();
        AdamState::new(lr, &shapes)
    }

    /// One update over all parameters. `grads` must align with `params`
    /// in order and shape; a non-finite gradient aborts the step.
    pub fn step(&mut self, params: &mut [Matrix], grads: &[Matrix]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::Contract(format!(
                "adam_step expects {} parameters, got {} params / {} grads",
                self.m.len(),
                params.len(),
                grads.len()
            )));
        }
        for (i, g) in grads.iter().enumerate() {
            if g.shape() != params[i].shape() {
                return Err(Error::dim("adam_step", params[i].shape(), g.shape()));
            }
            if !g.is_finite() {
                return Err(Error::NonFiniteGradient { index: i });
            }
        }
        self.step += 1;
        let t = self.step as f64;
        let bc1 = 1.0 - self.beta1.powf(t);
        let bc2 = 1.0 - self.beta2.powf(t);
        for i in 0..params.len() {
            let g = &grads[i];
            let m = &mut self.m[i];
            let v = &mut self.v[i];
            let (b1, b2, eps, lr) = (self.beta1, self.beta2, self.epsilon, self.lr);
            for j in 0..g.data().len() {
                let gj = g.data()[j];
                m.data_mut()[j] = b1 * m.data()[j] + (1.0 - b1) * gj;
                v.data_mut()[j] = b2 * v.data()[j] + (1.0 - b2) * gj * gj;
                let mhat = m.data()[j] / bc1;
                let vhat = v.data()[j] / bc2;
                params[i].data_mut()[j] -= lr * mhat / (vhat.sqrt() + eps);
            }
        }
        Ok(())
    }
}
