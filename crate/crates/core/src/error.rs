use std::fmt;

use thiserror::Error;

/// Which end of the half-line an integral fails to converge at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Zero,
    Infinity,
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Zero => f.write_str("zero"),
            End::Infinity => f.write_str("infinity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{0}")]
    ClassDomain(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("denominator of k is {2:e} <= 0 at (alpha, beta) = ({0}, {1})")]
    NonpositiveDenominator(f64, f64, f64),

    #[error("(alpha, beta) = ({alpha}, {beta}) outside the admissible region: {reason}")]
    Region { alpha: f64, beta: f64, reason: String },

    #[error("no sign change on [{lo}, {hi}] for {name} (residuals {f_lo:e}, {f_hi:e})")]
    NoSignChange {
        name: String,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root solver for {name} hit {iterations} iterations; bracket [{lo}, {hi}]")]
    MaxIterations {
        name: String,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("supremum not resolved: structured {structured} vs generic {generic}")]
    SupremumNotResolved { structured: f64, generic: f64 },

    #[error("function is not integrable at zero: {0}")]
    NotIntegrableAtZero(String),

    #[error("function is not integrable at infinity: {0}")]
    NotIntegrableAtInfinity(String),

    #[error("divergent integral at {end}: {detail}")]
    DivergentIntegral { end: End, detail: String },

    #[error("log power would exceed 1 ({0})")]
    LogPowerOverflow(String),

    #[error("malformed piecewise function: {0}")]
    MalformedFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
