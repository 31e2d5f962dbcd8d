//! Gaussian naive Bayes with variance smoothing proportional to the
//! largest per-feature variance of the training data.

use crate::error::Result;
use crate::linear::softmax_rows;
use numcore::Matrix;

#[derive(Debug, Clone)]
pub struct NbModel {
    pub priors: Vec<f64>,
    pub means: Matrix,  // class x feature
    pub vars: Matrix,   // class x feature, smoothing already added
    pub n_classes: usize,
}

impl NbModel {
    pub fn fit(x: &Matrix, y_idx: &[usize], n_classes: usize, smoothing: f64) -> NbModel {
        let d = x.cols();
        let n = x.rows();

        // per-feature population variance over all rows, for the smoothing scale
        let mut total_mean = vec![0.0; d];
        for r in 0..n {
            for (c, m) in total_mean.iter_mut().enumerate() {
                *m += x.get(r, c);
            }
        }
        for m in &mut total_mean {
            *m /= n as f64;
        }
        let mut max_var: f64 = 0.0;
        for c in 0..d {
            let mut v = 0.0;
            for r in 0..n {
                let dv = x.get(r, c) - total_mean[c];
                v += dv * dv;
            }
            max_var = max_var.max(v / n as f64);
        }
        let eps = (smoothing * max_var).max(1e-12);

        let mut counts = vec![0usize; n_classes];
        let mut means = Matrix::zeros(n_classes, d);
        for (r, &cls) in y_idx.iter().enumerate() {
            counts[cls] += 1;
            for c in 0..d {
                means.set(cls, c, means.get(cls, c) + x.get(r, c));
            }
        }
        for cls in 0..n_classes {
            if counts[cls] > 0 {
                for c in 0..d {
                    means.set(cls, c, means.get(cls, c) / counts[cls] as f64);
                }
            }
        }
        let mut vars = Matrix::zeros(n_classes, d);
        for (r, &cls) in y_idx.iter().enumerate() {
            for c in 0..d {
                let dv = x.get(r, c) - means.get(cls, c);
                vars.set(cls, c, vars.get(cls, c) + dv * dv);
            }
        }
        for cls in 0..n_classes {
            for c in 0..d {
                let v = if counts[cls] > 0 {
                    vars.get(cls, c) / counts[cls] as f64
                } else {
                    0.0
                };
                vars.set(cls, c, v + eps);
            }
        }

        let priors = counts
            .iter()
            .map(|&k| (k as f64 / n as f64) as f32 as f64)
            .collect();
        NbModel {
            priors,
            means: means.quantize_f32(),
            vars: vars.quantize_f32(),
            n_classes,
        }
    }

    pub fn proba(&self, queries: &Matrix) -> Result<Matrix> {
        let d = queries.cols();
        let mut log_post = Matrix::zeros(queries.rows(), self.n_classes);
        for q in 0..queries.rows() {
            for cls in 0..self.n_classes {
                let mut lp = if self.priors[cls] > 0.0 {
                    self.priors[cls].ln()
                } else {
                    f64::NEG_INFINITY
                };
                for c in 0..d {
                    let var = self.vars.get(cls, c);
                    let diff = queries.get(q, c) - self.means.get(cls, c);
                    lp += -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + diff * diff / var);
                }
                log_post.set(q, cls, lp);
            }
        }
        Ok(softmax_rows(&log_post))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirrored_inputs_get_mirrored_posteriors() {
        // symmetric classes around the origin with equal priors
        let x = Matrix::from_rows(&[
            vec![1.0, 2.0],
            vec![2.0, 1.0],
            vec![-1.0, -2.0],
            vec![-2.0, -1.0],
        ])
        .unwrap();
        let m = NbModel::fit(&x, &[0, 0, 1, 1], 2, 1e-9);
        let q = Matrix::from_rows(&[vec![1.5, 1.5], vec![-1.5, -1.5]]).unwrap();
        let p = m.proba(&q).unwrap();
        assert!((p.get(0, 0) - p.get(1, 1)).abs() < 1e-9);
        assert!((p.get(0, 1) - p.get(1, 0)).abs() < 1e-9);
        assert!(p.get(0, 0) > 0.9);
    }

    #[test]
    fn constant_features_still_finite() {
        let x = Matrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0]]).unwrap();
        let m = NbModel::fit(&x, &[0, 0, 1], 2, 1e-9);
        let p = m.proba(&x).unwrap();
        assert!(p.is_finite());
    }
}
