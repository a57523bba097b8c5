use thiserror::Error;

/// Errors surfaced by every fallible operation of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An input vector lies outside the lattice a map is defined on.
    #[error("domain error: {0}")]
    Domain(String),
    /// `Ker_Z(A)` meets the nonnegative orthant, so fibers may be infinite.
    #[error("matrix is not positively graded: {0}")]
    NotPositivelyGraded(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: &'static str, cap: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
