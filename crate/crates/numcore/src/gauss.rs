//! Seeded reparameterized Gaussian draws and the standard-normal KL.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::Prng;

/// z = mu + exp(logvar/2) .* eps with eps ~ N(0, I) drawn from `seed`.
/// Deterministic for a fixed seed; eps is a constant w.r.t. gradients
/// (the differentiable path lives in `Graph::reparam_sample`).
pub fn gaussian_sample(mu: &Matrix, logvar: &Matrix, seed: u64) -> Result<Matrix> {
    if mu.shape() != logvar.shape() {
        return Err(Error::dim("gaussian_sample", mu.shape(), logvar.shape()));
    }
    let mut rng = Prng::seed_from_u64(seed);
    let mut out = mu.clone();
    for (i, v) in out.data_mut().iter_mut().enumerate() {
        let std = (logvar.data()[i] * 0.5).exp();
        *v += std * rng.next_normal();
    }
    Ok(out)
}

/// KL(N(mu, e^logvar) || N(0, I)) = 0.5 * sum(mu^2 + e^logvar - 1 - logvar).
pub fn kl_std_normal(mu: &Matrix, logvar: &Matrix) -> Result<f64> {
    if mu.shape() != logvar.shape() {
        return Err(Error::dim("kl_std_normal", mu.shape(), logvar.shape()));
    }
    let mut acc = 0.0;
    for i in 0..mu.data().len() {
        let m = mu.data()[i];
        let lv = logvar.data()[i];
        acc += m * m + lv.exp() - 1.0 - lv;
    }
    Ok(0.5 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_variance_returns_mu() {
        let mu = Matrix::from_rows(&[vec![1.0, -2.0, 3.5]]).unwrap();
        let lv = Matrix::filled(1, 3, -60.0);
        let z = gaussian_sample(&mu, &lv, 42).unwrap();
        for (a, b) in z.data().iter().zip(mu.data()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn same_seed_bit_identical() {
        let mu = Matrix::zeros(4, 5);
        let lv = Matrix::zeros(4, 5);
        let a = gaussian_sample(&mu, &lv, 9).unwrap();
        let b = gaussian_sample(&mu, &lv, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn standard_draw_moments() {
        let mu = Matrix::zeros(100, 100);
        let lv = Matrix::zeros(100, 100);
        let z = gaussian_sample(&mu, &lv, 123).unwrap();
        let n = z.data().len() as f64;
        let mean = z.data().iter().sum::<f64>() / n;
        let var = z.data().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "var {var}");
    }

    #[test]
    fn kl_closed_forms() {
        let z = Matrix::zeros(1, 1);
        assert_eq!(kl_std_normal(&z, &z).unwrap(), 0.0);
        let one = Matrix::filled(1, 1, 1.0);
        assert!((kl_std_normal(&one, &z).unwrap() - 0.5).abs() < 1e-12);
        let ln4 = Matrix::filled(1, 1, 4.0f64.ln());
        let expect = 0.5 * (4.0 - 1.0 - 4.0f64.ln());
        assert!((kl_std_normal(&z, &ln4).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 0.8069).abs() < 1e-3);
    }

    #[test]
    fn shape_mismatch_is_dimension_error() {
        let mu = Matrix::zeros(2, 2);
        let lv = Matrix::zeros(2, 3);
        assert!(gaussian_sample(&mu, &lv, 1).is_err());
        assert!(kl_std_normal(&mu, &lv).is_err());
    }
}
