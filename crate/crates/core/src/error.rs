use thiserror::Error;

/// Failures raised by engine operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller broke a precondition: mismatched dimensions or weights,
    /// out-of-range index, wrong degree.
    #[error("usage error: {0}")]
    Usage(String),
    /// The requested value does not exist: zero denominator, undefined
    /// adjoint, pole of a series, operator outside the image of a map.
    #[error("math-domain error: {0}")]
    MathDomain(String),
    /// The equivariance system for one ξ-degree has no unique solution.
    #[error(
        "singular system at degree {degree}: rank {rank} of {unknowns} unknowns{}",
        if *.consistent { " (underdetermined)" } else { " (inconsistent)" }
    )]
    SingularSystem {
        degree: u32,
        rank: usize,
        unknowns: usize,
        consistent: bool,
    },
    /// The operation is outside what this engine implements.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::MathDomain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
