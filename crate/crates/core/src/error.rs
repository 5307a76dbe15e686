use thiserror::Error;

/// Errors raised by the spectrum, special-function and thermodynamics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkpError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no bound spectrum under these fields (nu radicand = {radicand:.6e})")]
    NoBoundSpectrum { radicand: f64 },

    #[error("3D reduction defined at zero fields only")]
    ThreeDRequiresZeroFields,

    #[error("derivative singular: nu radicand {radicand:.3e} is within tolerance of zero")]
    DerivativeSingular { radicand: f64 },

    #[error("erfi overflow at x = {0}")]
    Overflow(f64),

    #[error("hypergeometric pole: c = {0} is a non-positive integer reached by the series")]
    Pole(f64),

    #[error("non-normalizable state: {0}")]
    NonNormalizable(String),

    #[error("classical limit undefined: empty integration interval (eta_max = 0)")]
    ClassicalLimitUndefined,

    #[error("closed form numerically unstable; use quadrature ({0})")]
    ClosedFormUnstable(String),

    #[error("quadrature did not converge: estimate {estimate:.3e}, error {error:.3e}")]
    QuadratureFailed { estimate: f64, error: f64 },

    #[error("finite-difference step underflow: {0}")]
    StepUnderflow(String),
}

pub type Result<T> = std::result::Result<T, SkpError>;

pub(crate) fn invalid(msg: impl Into<String>) -> SkpError {
    SkpError::InvalidParameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> SkpError {
    SkpError::Domain(msg.into())
}
