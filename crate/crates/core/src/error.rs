use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or index lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is well defined mathematically but has no closed form here.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Adaptive quadrature hit its subdivision cap before meeting the tolerance.
    #[error("quadrature did not converge: error bound {error_bound:e} > tol {tol:e} after {subdivisions} subdivisions")]
    QuadratureFailed {
        error_bound: f64,
        tol: f64,
        subdivisions: usize,
    },

    /// A function sample was NaN or infinite.
    #[error("non-finite sample at x = {0}")]
    NonFinite(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
