use thiserror::Error;

/// Errors raised by the decomposition routines and their I/O front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not a contraction: norm {norm:.3e} exceeds 1 + {tol:.1e}")]
    NotContractive { norm: f64, tol: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not an isometry (residual {residual:.3e})")]
    NotIsometry { residual: f64 },

    #[error("matrix is not an orthogonal projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("point {modulus} lies outside the open unit disc")]
    OutsideDisc { modulus: f64 },

    #[error("resolvent (I - lambda D) is numerically singular")]
    Singular,

    #[error("state operator D is not nilpotent within tolerance")]
    NotNilpotent,

    #[error("subspace is not shift invariant within the window (residual {residual:.3e})")]
    NotShiftInvariant { residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
