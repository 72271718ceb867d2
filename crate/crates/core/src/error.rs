use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters or configuration values.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An operation was called on an input that violates its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix is not Hermitian (symmetry residue {residue:.3e})")]
    NotHermitian { residue: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// Embedded real eigenvalues failed to pair up.
    #[error("eigenvalue pairing residue {residue:.3e} exceeds tolerance")]
    Pairing { residue: f64 },

    #[error("Gram eigenvalue {0:.3e} is negative beyond rounding")]
    NegativeEigenvalue(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical kernels (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Pairing { .. } | Error::NegativeEigenvalue(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
