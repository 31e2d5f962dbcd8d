//! Numerical substrate: dense matrices, a small reverse-mode autodiff
//! engine, Adam, and seeded Gaussian sampling.
//!
//! Everything here is single-threaded and bit-deterministic for a fixed
//! seed; parallelism belongs to the layers above.

pub mod adam;
pub mod error;
pub mod gauss;
pub mod graph;
pub mod matrix;
pub mod rng;

pub use adam::AdamState;
pub use error::{Error, Result};
pub use gauss::{gaussian_sample, kl_std_normal};
pub use graph::{Gradients, Graph, NodeId};
pub use matrix::{elementwise, ElemKind, Matrix};
pub use rng::{derive_seed, Prng};
