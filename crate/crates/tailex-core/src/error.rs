use alloc::string::String;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation is not defined for this branch or parameter combination.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A moment or integral required by the operation is infinite.
    #[error("divergent: {0}")]
    Divergent(String),
    /// Quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {abs_error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        abs_error: f64,
        intervals: usize,
    },
    /// The integrand returned a non-finite value.
    #[error("integrand not finite at x = {x:e}")]
    NonFinite { x: f64 },
    /// No sign change across the root bracket.
    #[error("root not bracketed: f({lo:e}) = {f_lo:e}, f({hi:e}) = {f_hi:e}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// The root finder hit its iteration cap.
    #[error("root finder exhausted {iterations} iterations, bracket [{lo:e}, {hi:e}]")]
    RootIterations { iterations: usize, lo: f64, hi: f64 },
    /// The construction parameters produce an invalid distribution.
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}
