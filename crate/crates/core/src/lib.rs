//! Benchmark toolkit for feature-interaction recovery on tabular data.
//!
//! The crate generates synthetic tabular datasets whose ground-truth
//! feature-interaction graph is known (Gaussian graphical models and
//! structural causal models), trains a minimal maskable attention regressor
//! on them, turns the recorded attention maps into weighted adjacency
//! matrices, and scores both structure recovery (ROC-AUC) and prediction
//! (R²) against the generating graph.

pub mod adjacency;
pub mod dataset;
mod error;
pub mod extract;
pub mod graphs;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod synth;
pub mod tol;

pub use adjacency::{BinaryAdjacency, WeightedAdjacency};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use rng::SeededRng;

/// Version tag of the on-disk dataset/run formats.
pub const FORMAT_VERSION: &str = "1";
