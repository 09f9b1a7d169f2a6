use thiserror::Error;

use crate::norm::NormResult;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient vector must contain at least one entry")]
    EmptyCoefficients,

    #[error("coefficient b_{index} is not finite")]
    NonFiniteCoefficient { index: usize },

    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("the zero function is not admissible here")]
    ZeroFunction,

    #[error("coefficient b_{index} = {re}{im:+}i is not a nonnegative real")]
    NotNonNegative { index: usize, re: f64, im: f64 },

    #[error("norm refinement did not reach tolerance {tol:e}; best bracket value {} (error estimate {:e})", best.value, best.error_bound)]
    NoConvergence { tol: f64, best: Box<NormResult> },

    #[error("malformed coefficient document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}
