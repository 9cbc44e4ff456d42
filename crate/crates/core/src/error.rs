use thiserror::Error;

/// Errors raised by the field, Fock and kernel routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate direction: the zero wavevector has no spherical triad")]
    DegenerateDirection,
    #[error("occupation {occupation} exceeds truncation level n_max = {n_max}")]
    Truncation { occupation: usize, n_max: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("non-finite value encountered in {0}")]
    Propagation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
