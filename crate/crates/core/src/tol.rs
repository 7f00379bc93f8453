//! Central numeric tolerances. Tests and library code share these so a
//! threshold is never duplicated and silently diverging.

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max allowed |m[i][j] - m[j][i]| before an SPD input is rejected.
    pub spd_symmetry: f64,
    /// Relative Frobenius tolerance for Cholesky/inverse reconstruction.
    pub reconstruction: f64,
    /// Attention rows must sum to 1 within this.
    pub attention_row_sum: f64,
    /// Normalized SCM columns must have mean 0 / variance 1 within this.
    pub scm_normalization: f64,
}

pub const TOL: Tolerances = Tolerances {
    spd_symmetry: 1e-10,
    reconstruction: 1e-8,
    attention_row_sum: 1e-6,
    scm_normalization: 1e-9,
};
