//! Error types shared across the kernel.

use thiserror::Error;

/// Errors raised by algebra, metric, structure and subalgebra operations.
#[derive(Debug, Clone, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bracket entry requires i < j, got i={i}, j={j}")]
    InvalidBracketEntry { i: usize, j: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("metric is not symmetric (max asymmetry {residual:.3e})")]
    AsymmetricMetric { residual: f64 },

    #[error("metric is not positive definite (Cholesky factorization failed)")]
    SingularMetric,

    #[error("algebra is not 2-step nilpotent")]
    NotTwoStep,

    #[error("structure fails almost-contact validation (max residual {residual:.3e})")]
    InvalidStructure { residual: f64 },

    #[error("structure is not cosymplectic (residual {residual:.3e})")]
    NotCosymplectic { residual: f64 },

    #[error("basis vectors are linearly dependent (smallest singular value {sigma:.3e})")]
    DependentBasis { sigma: f64 },

    #[error("subspace is not closed under the bracket (residual {residual:.3e} at column pair ({i},{j}))")]
    NotClosed { residual: f64, i: usize, j: usize },

    #[error("vector is not tangent to the subalgebra (normal component {residual:.3e})")]
    NotTangent { residual: f64 },

    #[error("vector is not normal to the subalgebra (tangent component {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("no almost contact structure attached to the ambient algebra")]
    NoStructure,

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
