//! Downstream classifiers trained on joint latent features, plus
//! evaluation metrics. All kinds are deterministic for a fixed seed and
//! serialize to a common binary format.

pub mod error;
pub mod forest;
pub mod knn;
pub mod linear;
pub mod metrics;
pub mod model;
pub mod naive_bayes;
pub mod tree;

pub use error::{Error, Result};
pub use metrics::{evaluate, ClassMetrics, Metrics};
pub use model::{train_classifier, ClassifierKind, ClassifierModel};

/// Hyperparameters with the fixed defaults used throughout.
#[derive(Debug, Clone)]
pub struct Hyper {
    pub lr: f64,
    pub logreg_epochs: usize,
    pub logreg_l2: f64,
    pub svm_epochs: usize,
    pub svm_lr: f64,
    pub mlp_epochs: usize,
    pub mlp_hidden: usize,
    pub knn_k: usize,
    pub trees: usize,
    pub nb_smoothing: f64,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper {
            lr: 1e-3,
            logreg_epochs: 300,
            logreg_l2: 1e-4,
            svm_epochs: 200,
            svm_lr: 1e-2,
            mlp_epochs: 200,
            mlp_hidden: 100,
            knn_k: 5,
            trees: 100,
            nb_smoothing: 1e-9,
        }
    }
}
