use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands live in different spaces or algebras, or an argument is out of range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structure constants fail antisymmetry or the Jacobi identity.
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    /// Generators fail the skew-Hermitian or homomorphism invariant.
    #[error("invalid representation: {0}")]
    InvalidRep(String),

    /// Malformed builtin name, state, or command-line value.
    #[error("parse error: {0}")]
    Parse(String),

    /// An iterative numerical routine did not converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
