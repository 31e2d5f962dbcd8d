//! Joint functions fusing per-view latents into one representation:
//! arithmetic mean, product of Gaussian experts, and the
//! mixture-of-products-of-experts decomposition.

use crate::error::{Error, Result};
use numcore::Matrix;

/// Diagonal Gaussian over a batch of latent rows.
#[derive(Debug, Clone)]
pub struct GaussianPosterior {
    pub mu: Matrix,
    pub logvar: Matrix,
}

impl GaussianPosterior {
    pub fn new(mu: Matrix, logvar: Matrix) -> Result<Self> {
        if mu.shape() != logvar.shape() {
            return Err(Error::Num(numcore::Error::DimMismatch {
                op: "gaussian_posterior",
                lhs_rows: mu.rows(),
                lhs_cols: mu.cols(),
                rhs_rows: logvar.rows(),
                rhs_cols: logvar.cols(),
            }));
        }
        Ok(GaussianPosterior { mu, logvar })
    }

    /// The standard normal N(0, I) — also the product of zero experts
    /// with the prior included.
    pub fn standard(rows: usize, cols: usize) -> Self {
        GaussianPosterior {
            mu: Matrix::zeros(rows, cols),
            logvar: Matrix::zeros(rows, cols),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mu.shape()
    }
}

/// Elementwise arithmetic mean of per-view latents.
pub fn joint_mean(latents: &[Matrix]) -> Result<Matrix> {
    let first = latents
        .first()
        .ok_or_else(|| Error::Contract("joint_mean requires at least one input".into()))?;
    let mut acc = first.clone();
    for m in &latents[1..] {
        acc = acc.add(m)?;
    }
    Ok(acc.scale(1.0 / latents.len() as f64))
}

/// Product of Gaussian experts in closed form: the joint precision is the
/// sum of expert precisions (plus one for the standard-normal prior when
/// included) and the joint mean is the precision-weighted expert mean.
pub fn joint_poe(posteriors: &[GaussianPosterior], include_prior: bool) -> Result<GaussianPosterior> {
    let first = posteriors
        .first()
        .ok_or_else(|| Error::Contract("joint_poe requires at least one posterior".into()))?;
    let shape = first.shape();
    for p in posteriors {
        if p.shape() != shape {
            return Err(Error::Num(numcore::Error::DimMismatch {
                op: "joint_poe",
                lhs_rows: shape.0,
                lhs_cols: shape.1,
                rhs_rows: p.shape().0,
                rhs_cols: p.shape().1,
            }));
        }
    }
    if posteriors.len() == 1 && !include_prior {
        return Ok(posteriors[0].clone());
    }

    let (rows, cols) = shape;
    let mut mu = Matrix::zeros(rows, cols);
    let mut logvar = Matrix::zeros(rows, cols);
    for i in 0..rows * cols {
        let mut prec = if include_prior { 1.0 } else { 0.0 };
        let mut weighted = 0.0;
        for p in posteriors {
            let pv = (-p.logvar.data()[i]).exp();
            prec += pv;
            weighted += p.mu.data()[i] * pv;
        }
        mu.data_mut()[i] = weighted / prec;
        logvar.data_mut()[i] = -prec.ln();
    }
    GaussianPosterior::new(mu, logvar)
}

/// All 2^n - 1 non-empty view subsets with their PoE posteriors (prior
/// included in each product), in ascending bitmask order.
#[derive(Debug, Clone)]
pub struct MopoeComponents {
    pub subsets: Vec<(Vec<usize>, GaussianPosterior)>,
}

impl MopoeComponents {
    /// Deterministic downstream representation: the uniform-mixture mean,
    /// i.e. the average of the subset-PoE means.
    pub fn mixture_mean(&self) -> Result<Matrix> {
        let mus: Vec<Matrix> = self.subsets.iter().map(|(_, p)| p.mu.clone()).collect();
        joint_mean(&mus)
    }
}

pub fn joint_mopoe(posteriors: &[GaussianPosterior]) -> Result<MopoeComponents> {
    let n = posteriors.len();
    if n == 0 {
        return Err(Error::Contract("joint_mopoe requires at least one view".into()));
    }
    if n > 16 {
        return Err(Error::Contract(format!(
            "joint_mopoe over {n} views would enumerate {} subsets",
            (1u64 << n) - 1
        )));
    }
    let mut subsets = Vec::with_capacity((1 << n) - 1);
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let members: Vec<GaussianPosterior> =
            idx.iter().map(|&v| posteriors[v].clone()).collect();
        let poe = joint_poe(&members, true)?;
        subsets.push((idx, poe));
    }
    Ok(MopoeComponents { subsets })
}
