use thiserror::Error;

/// Errors raised by factorization, coordinate and measure routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid rank, signature, word or other configuration input.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed numeric input (wrong shape, not unimodular, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A disk coordinate reached or crossed the unit circle.
    #[error("domain violation: |zeta| = {modulus} is not inside the disk of radius {limit}")]
    DomainViolation { modulus: f64, limit: f64 },

    /// The element does not lie in the requested Birkhoff component,
    /// or the requested component is empty for the real form.
    #[error("stratum error: {0}")]
    Stratum(String),

    /// A pivot fell into the ambiguous band between zero and nonzero.
    #[error("stratum boundary: {0}")]
    StratumBoundary(String),

    /// A structural identity failed beyond tolerance.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A finite-difference estimate is unreliable at the requested point.
    #[error("numerical warning: {0}")]
    NumericalWarning(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors signalling that the input sits on a measure-zero
    /// boundary; samplers treat these as a request to draw again.
    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            Error::StratumBoundary(_) | Error::DomainViolation { .. } | Error::Stratum(_)
        )
    }
}
