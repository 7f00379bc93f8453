use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix not positive definite: pivot {pivot:.3e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix not symmetric within {tol:.1e}: |m[{i}][{j}] - m[{j}][{i}]| = {diff:.3e}")]
    NotSymmetric { i: usize, j: usize, diff: f64, tol: f64 },

    #[error("invalid DAG layout: {0}")]
    InvalidLayout(String),

    #[error("computational map takes {expected} parents, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("pre-noise column of node {node} has zero variance; normalization undefined")]
    DegenerateColumn { node: usize },

    #[error("non-finite loss at epoch {epoch} ({detail})")]
    NonFiniteLoss { epoch: usize, detail: String },

    #[error("ROC-AUC undefined: {0}")]
    UndefinedAuc(String),

    #[error("R² undefined: y_true has zero variance")]
    ZeroVariance,

    #[error("insufficient samples: need {needed}, have {have}")]
    InsufficientSamples { needed: usize, have: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numeric machinery itself, as opposed to bad
    /// inputs or I/O. The CLI maps these to a distinct exit code.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::NonFiniteLoss { .. }
                | Error::DegenerateColumn { .. }
        )
    }
}
