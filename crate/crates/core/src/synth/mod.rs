//! Synthetic data pipelines with known ground-truth interaction graphs.

pub mod mvn;
pub mod scm;
