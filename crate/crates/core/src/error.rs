use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("positive polar factor is singular (|det| = {det:e})")]
    SingularPolarFactor { det: f64 },

    #[error("character series did not reach tolerance {tol:e} within {terms} terms")]
    NonConvergence { terms: usize, tol: f64 },

    #[error("quadrature nodes cover [{lo}, {hi}] but [{need_lo}, {need_hi}] is required")]
    QuadratureRange {
        lo: f64,
        hi: f64,
        need_lo: f64,
        need_hi: f64,
    },

    #[error("gauge map is not based: g_0 differs from the identity by {0:e}")]
    NotBased(f64),

    #[error("finite differences inconsistent under step halving (spread {spread:e})")]
    FiniteDifference { spread: f64 },

    #[error("logarithm requested too close to the branch cut (angle {angle})")]
    BranchCut { angle: f64 },

    #[error("heat-kernel denominator {0:e} below tolerance")]
    SmallDenominator(f64),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
