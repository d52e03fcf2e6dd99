use thiserror::Error;

/// Errors raised by the compute modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model or operation parameter lies outside its admissible domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// The field/potential combination does not satisfy the regime an
    /// operation requires (e.g. no sign change for a center root).
    #[error("regime violation: {0}")]
    Regime(String),

    /// A quadrature or refinement loop did not settle.
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    /// An integrand or intermediate produced NaN or infinity.
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
