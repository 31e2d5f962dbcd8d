//! Trained model state and deterministic joint encoding.

use crate::config::{ModelKind, MvaeConfig};
use crate::error::{Error, Result};
use crate::joint::{joint_mean, joint_mopoe, joint_poe, GaussianPosterior};
use numcore::{derive_seed, Matrix, Prng};

/// Per-view encoder: input -> ReLU(hidden) -> linear latent head(s).
/// The logvar head exists only for variational kinds.
#[derive(Debug, Clone)]
pub struct EncoderParams {
    pub w1: Matrix,
    pub b1: Matrix,
    pub w_mu: Matrix,
    pub b_mu: Matrix,
    pub w_lv: Option<Matrix>,
    pub b_lv: Option<Matrix>,
}

impl EncoderParams {
    pub fn init(input_dim: usize, hidden: usize, latent: usize, variational: bool, seed: u64) -> Self {
        let mut rng = Prng::seed_from_u64(seed);
        let w1 = rng.normal_matrix(input_dim, hidden, (2.0 / input_dim as f64).sqrt());
        let w_mu = rng.normal_matrix(hidden, latent, (1.0 / hidden as f64).sqrt());
        let (w_lv, b_lv) = if variational {
            (
                Some(rng.normal_matrix(hidden, latent, (1.0 / hidden as f64).sqrt())),
                Some(Matrix::zeros(1, latent)),
            )
        } else {
            (None, None)
        };
        EncoderParams {
            w1,
            b1: Matrix::zeros(1, hidden),
            w_mu,
            b_mu: Matrix::zeros(1, latent),
            w_lv,
            b_lv,
        }
    }

    /// Forward pass on normalized input; returns (mu, logvar).
    pub fn forward(&self, x: &Matrix) -> Result<(Matrix, Option<Matrix>)> {
        let h = x.matmul(&self.w1)?.add(&self.b1)?.relu();
        let mu = h.matmul(&self.w_mu)?.add(&self.b_mu)?;
        let lv = match (&self.w_lv, &self.b_lv) {
            (Some(w), Some(b)) => Some(h.matmul(w)?.add(b)?),
            _ => None,
        };
        Ok((mu, lv))
    }

    pub fn quantize_f32(&mut self) {
        self.w1 = self.w1.quantize_f32();
        self.b1 = self.b1.quantize_f32();
        self.w_mu = self.w_mu.quantize_f32();
        self.b_mu = self.b_mu.quantize_f32();
        if let Some(w) = &self.w_lv {
            self.w_lv = Some(w.quantize_f32());
        }
        if let Some(b) = &self.b_lv {
            self.b_lv = Some(b.quantize_f32());
        }
    }
}

/// Mirror network used only during training: latent -> ReLU(hidden) -> input.
#[derive(Debug, Clone)]
pub struct DecoderParams {
    pub w1: Matrix,
    pub b1: Matrix,
    pub w2: Matrix,
    pub b2: Matrix,
}

impl DecoderParams {
    pub fn init(latent: usize, hidden: usize, output_dim: usize, seed: u64) -> Self {
        let mut rng = Prng::seed_from_u64(seed);
        DecoderParams {
            w1: rng.normal_matrix(latent, hidden, (2.0 / latent as f64).sqrt()),
            b1: Matrix::zeros(1, hidden),
            w2: rng.normal_matrix(hidden, output_dim, (1.0 / hidden as f64).sqrt()),
            b2: Matrix::zeros(1, output_dim),
        }
    }
}

/// Per-view z-score statistics fitted on the training split.
#[derive(Debug, Clone)]
pub struct ViewStats {
    pub name: String,
    pub dim: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

pub const STD_FLOOR: f64 = 1e-8;

impl ViewStats {
    pub fn fit(name: &str, x: &Matrix) -> ViewStats {
        let (rows, cols) = x.shape();
        let mut mean = vec![0.0; cols];
        for r in 0..rows {
            for (c, m) in mean.iter_mut().enumerate() {
                *m += x.get(r, c);
            }
        }
        for m in &mut mean {
            *m /= rows.max(1) as f64;
        }
        let mut var = vec![0.0; cols];
        for r in 0..rows {
            for (c, v) in var.iter_mut().enumerate() {
                let d = x.get(r, c) - mean[c];
                *v += d * d;
            }
        }
        let std = var
            .iter()
            .map(|v| (v / rows.max(1) as f64).sqrt().max(STD_FLOOR))
            .collect();
        ViewStats {
            name: name.to_string(),
            dim: cols,
            mean,
            std,
        }
    }

    pub fn normalize(&self, x: &Matrix) -> Matrix {
        let mut out = x.clone();
        let cols = x.cols();
        for r in 0..x.rows() {
            for c in 0..cols {
                out.set(r, c, (x.get(r, c) - self.mean[c]) / self.std[c]);
            }
        }
        out
    }

    pub fn quantize_f32(&mut self) {
        for m in &mut self.mean {
            *m = *m as f32 as f64;
        }
        for s in &mut self.std {
            *s = *s as f32 as f64;
        }
    }
}

/// One mean/recon pair per epoch; `recon` is the reconstruction portion
/// of the kind's own loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLoss {
    pub total: f64,
    pub recon: f64,
}

/// Trained multi-view autoencoder: per-view encoders plus normalization
/// stats. Decoders and the discriminator are training-only and dropped.
/// All parameters are rounded through f32 (the on-disk precision), so a
/// save/load round trip is bit-exact.
#[derive(Debug, Clone)]
pub struct TrainedMvae {
    pub kind: ModelKind,
    pub latent_dim: usize,
    pub hidden_dim: usize,
    pub views: Vec<ViewStats>,
    pub encoders: Vec<EncoderParams>,
    pub loss_history: Vec<EpochLoss>,
}

impl TrainedMvae {
    /// Freshly initialized (untrained) model for the given view stats.
    pub fn init(cfg: &MvaeConfig, stats: Vec<ViewStats>) -> TrainedMvae {
        let encoders = stats
            .iter()
            .enumerate()
            .map(|(v, s)| {
                EncoderParams::init(
                    s.dim,
                    cfg.hidden_dim,
                    cfg.latent_dim,
                    cfg.kind.is_variational(),
                    derive_seed(cfg.seed, &[1, v as u64]),
                )
            })
            .collect();
        TrainedMvae {
            kind: cfg.kind,
            latent_dim: cfg.latent_dim,
            hidden_dim: cfg.hidden_dim,
            views: stats,
            encoders,
            loss_history: Vec::new(),
        }
    }

    pub fn view_names(&self) -> Vec<&str> {
        self.views.iter().map(|v| v.name.as_str()).collect()
    }

    /// Round all learned state through f32.
    pub fn quantize_f32(&mut self) {
        for e in &mut self.encoders {
            e.quantize_f32();
        }
        for v in &mut self.views {
            v.quantize_f32();
        }
    }

    fn check_inputs(&self, views: &[Matrix]) -> Result<usize> {
        if views.len() != self.views.len() {
            return Err(Error::Contract(format!(
                "model fuses {} views, got {}",
                self.views.len(),
                views.len()
            )));
        }
        let rows = views.first().map(|m| m.rows()).unwrap_or(0);
        for (i, (x, meta)) in views.iter().zip(&self.views).enumerate() {
            if x.cols() != meta.dim {
                return Err(Error::ViewDim {
                    view: meta.name.clone(),
                    expected: meta.dim,
                    got: x.cols(),
                });
            }
            if x.rows() != rows {
                return Err(Error::Integrity(format!(
                    "view {} has {} rows, expected {}",
                    self.views[i].name,
                    x.rows(),
                    rows
                )));
            }
        }
        Ok(rows)
    }

    /// Per-view posteriors on raw inputs (normalization applied here).
    pub fn encode_views(&self, views: &[Matrix]) -> Result<Vec<(Matrix, Option<Matrix>)>> {
        self.check_inputs(views)?;
        views
            .iter()
            .zip(&self.views)
            .zip(&self.encoders)
            .map(|((x, stats), enc)| enc.forward(&stats.normalize(x)))
            .collect()
    }

    /// Deterministic joint representation: variational kinds use posterior
    /// means, never a sample.
    pub fn encode_joint(&self, views: &[Matrix]) -> Result<Matrix> {
        let encoded = self.encode_views(views)?;
        match self.kind {
            ModelKind::JointAae | ModelKind::WAae | ModelKind::Dvcca => {
                let mus: Vec<Matrix> = encoded.into_iter().map(|(mu, _)| mu).collect();
                joint_mean(&mus)
            }
            ModelKind::MVae | ModelKind::MeMVae | ModelKind::MvtCae => {
                let posts = to_posteriors(encoded)?;
                Ok(joint_poe(&posts, true)?.mu)
            }
            ModelKind::MoPoeVae => {
                let posts = to_posteriors(encoded)?;
                joint_mopoe(&posts)?.mixture_mean()
            }
        }
    }
}

fn to_posteriors(encoded: Vec<(Matrix, Option<Matrix>)>) -> Result<Vec<GaussianPosterior>> {
    encoded
        .into_iter()
        .map(|(mu, lv)| {
            let lv = lv.ok_or_else(|| {
                Error::Contract("variational fusion requires logvar heads".into())
            })?;
            GaussianPosterior::new(mu, lv)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_model(kind: ModelKind) -> TrainedMvae {
        let cfg = MvaeConfig {
            hidden_dim: 8,
            seed: 5,
            ..MvaeConfig::new(kind, 3)
        };
        let stats = vec![
            ViewStats {
                name: "a".into(),
                dim: 4,
                mean: vec![0.0; 4],
                std: vec![1.0; 4],
            },
            ViewStats {
                name: "b".into(),
                dim: 2,
                mean: vec![0.0; 2],
                std: vec![1.0; 2],
            },
        ];
        TrainedMvae::init(&cfg, stats)
    }

    #[test]
    fn encode_joint_deterministic_and_row_counts() {
        let m = tiny_model(ModelKind::MVae);
        let mut rng = Prng::seed_from_u64(1);
        let views = vec![rng.normal_matrix(5, 4, 1.0), rng.normal_matrix(5, 2, 1.0)];
        let z1 = m.encode_joint(&views).unwrap();
        let z2 = m.encode_joint(&views).unwrap();
        assert_eq!(z1, z2);
        assert_eq!(z1.shape(), (5, 3));

        let single = vec![views[0].select_rows(&[2]), views[1].select_rows(&[2])];
        let z_single = m.encode_joint(&single).unwrap();
        assert_eq!(z_single.shape(), (1, 3));
    }

    #[test]
    fn encode_joint_batch_partition_invariant() {
        for kind in ModelKind::ALL {
            let m = tiny_model(kind);
            let mut rng = Prng::seed_from_u64(2);
            let views = vec![rng.normal_matrix(20, 4, 1.0), rng.normal_matrix(20, 2, 1.0)];
            let all = m.encode_joint(&views).unwrap();
            let mut parts = Vec::new();
            for chunk in (0..20).collect::<Vec<_>>().chunks(7) {
                let sub = vec![views[0].select_rows(chunk), views[1].select_rows(chunk)];
                parts.push(m.encode_joint(&sub).unwrap());
            }
            let stitched = Matrix::concat_rows(&parts).unwrap();
            assert_eq!(all, stitched, "kind {kind}");
        }
    }

    #[test]
    fn dimension_error_names_the_view() {
        let m = tiny_model(ModelKind::JointAae);
        let views = vec![Matrix::zeros(3, 4), Matrix::zeros(3, 9)];
        let err = m.encode_joint(&views).unwrap_err();
        assert!(err.to_string().contains('b'), "{err}");
    }

    #[test]
    fn stats_fit_and_floor() {
        let x = Matrix::from_rows(&[vec![1.0, 5.0], vec![3.0, 5.0]]).unwrap();
        let s = ViewStats::fit("v", &x);
        assert_eq!(s.mean, vec![2.0, 5.0]);
        assert!((s.std[0] - 1.0).abs() < 1e-12);
        assert_eq!(s.std[1], STD_FLOOR); // constant feature hits the floor
    }
}
