use crate::error::{Error, Result};

/// The seven multi-view autoencoder variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    JointAae,
    WAae,
    MVae,
    MeMVae,
    Dvcca,
    MoPoeVae,
    MvtCae,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::JointAae,
        ModelKind::WAae,
        ModelKind::MVae,
        ModelKind::MeMVae,
        ModelKind::Dvcca,
        ModelKind::MoPoeVae,
        ModelKind::MvtCae,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::JointAae => "jointAAE",
            ModelKind::WAae => "wAAE",
            ModelKind::MVae => "mVAE",
            ModelKind::MeMVae => "me_mVAE",
            ModelKind::Dvcca => "DVCCA",
            ModelKind::MoPoeVae => "MoPoEVAE",
            ModelKind::MvtCae => "mvtCAE",
        }
    }

    pub fn from_name(name: &str) -> Option<ModelKind> {
        ModelKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn code(self) -> u8 {
        match self {
            ModelKind::JointAae => 0,
            ModelKind::WAae => 1,
            ModelKind::MVae => 2,
            ModelKind::MeMVae => 3,
            ModelKind::Dvcca => 4,
            ModelKind::MoPoeVae => 5,
            ModelKind::MvtCae => 6,
        }
    }

    pub fn from_code(code: u8) -> Option<ModelKind> {
        ModelKind::ALL.into_iter().find(|k| k.code() == code)
    }

    /// Variational kinds carry a logvar head on every encoder; adversarial
    /// kinds map straight to a point in latent space.
    pub fn is_variational(self) -> bool {
        !matches!(self, ModelKind::JointAae | ModelKind::WAae)
    }

    pub fn is_adversarial(self) -> bool {
        matches!(self, ModelKind::JointAae | ModelKind::WAae)
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct MvaeConfig {
    pub kind: ModelKind,
    pub latent_dim: usize,
    /// One entry per view. May be empty, in which case dimensions are
    /// adopted from the training data.
    pub input_dims: Vec<usize>,
    pub hidden_dim: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub seed: u64,
    /// Adversarial weight (jointAAE / wAAE).
    pub gamma: f64,
    /// KL weight (variational kinds).
    pub beta: f64,
    /// Gradient-penalty weight (wAAE).
    pub lambda_gp: f64,
}

impl MvaeConfig {
    pub fn new(kind: ModelKind, latent_dim: usize) -> Self {
        MvaeConfig {
            kind,
            latent_dim,
            input_dims: Vec::new(),
            hidden_dim: 256,
            epochs: 200,
            batch_size: 64,
            lr: 1e-3,
            seed: 0,
            gamma: 1.0,
            beta: 1.0,
            lambda_gp: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.latent_dim < 1 {
            return Err(Error::Contract("latent_dim must be >= 1".into()));
        }
        if self.hidden_dim < 1 {
            return Err(Error::Contract("hidden_dim must be >= 1".into()));
        }
        if self.batch_size < 1 {
            return Err(Error::Contract("batch_size must be >= 1".into()));
        }
        for (i, &d) in self.input_dims.iter().enumerate() {
            if d < 1 {
                return Err(Error::Contract(format!("input dim of view {i} must be >= 1")));
            }
        }
        Ok(())
    }
}
