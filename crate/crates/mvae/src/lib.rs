//! Multi-view autoencoders: per-view encoders/decoders, joint functions,
//! per-kind losses, the training loop, joint encoding, and model files.

pub mod config;
pub mod error;
pub mod joint;
pub mod loss;
pub mod model;
pub mod serialize;
pub mod train;

pub use config::{ModelKind, MvaeConfig};
pub use error::{Error, Result};
pub use joint::{joint_mean, joint_mopoe, joint_poe, GaussianPosterior, MopoeComponents};
pub use model::{EncoderParams, EpochLoss, TrainedMvae, ViewStats};
pub use serialize::{load_mvae, mvae_from_bytes, mvae_to_bytes, save_mvae};
pub use train::train_mvae;
