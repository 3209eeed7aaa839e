use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the geometry and quadrature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller violated a documented precondition (bad dimensions, counts, parameters).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input lies outside the domain where the object is defined (zero lift, μ ≤ 1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An integrand produced a non-finite value at a quadrature node.
    #[error("non-finite integrand value {value} at node z = {z}")]
    NonFinite { z: Complex64, value: f64 },

    /// A numerical procedure failed (non positive-definite Gram matrix, no convergence).
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
