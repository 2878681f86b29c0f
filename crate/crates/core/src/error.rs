use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Cancellation in an alternating sum pushed the relative error past the tolerance.
    #[error(
        "precision loss in {what}: estimated error {estimate:.3e} exceeds tolerance {tol:.3e} \
         after {terms} terms"
    )]
    PrecisionLoss { what: &'static str, estimate: f64, tol: f64, terms: usize },

    #[error("quadrature failed in {what}: error estimate {estimate:.3e} > tolerance {tol:.3e}")]
    Quadrature { what: String, estimate: f64, tol: f64 },

    /// Truncated Laplace integral left a tail larger than the tolerance.
    #[error("truncation tail {estimate:.3e} exceeds tolerance {tol:.3e}")]
    Tail { estimate: f64, tol: f64 },

    #[error("degenerate order density at r = {r}: B(r e^(i pi)) = {re} + {im}i has no argument in (0, pi]")]
    DegenerateDensity { r: f64, re: f64, im: f64 },

    #[error("invalid density spec: {0}")]
    InvalidDensity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
