use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime")]
    NotPrime(u32),
    #[error("invalid coefficient algebra: {0}")]
    InvalidAlgebra(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composite of consecutive differentials is nonzero")]
    CompositionNonzero,
    #[error("size guard exceeded in {construction}: {size} morphisms > bound {bound}")]
    SizeGuardExceeded {
        construction: String,
        size: usize,
        bound: usize,
    },
    #[error("diagrams do not share base category and coefficients")]
    IncompatibleBase,
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
