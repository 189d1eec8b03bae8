use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {name} = {value} ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A configuration invariant does not hold.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The double series could not be truncated within tolerance before
    /// hitting the per-index term cap.
    #[error(
        "series truncation failed: tail bound {tail_bound:e} exceeds tolerance {tolerance:e} \
         with max_terms = {max_terms}"
    )]
    Truncation {
        tail_bound: f64,
        tolerance: f64,
        max_terms: usize,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// The result is not representable as a finite `f64`.
    #[error("{0} overflows f64")]
    Overflow(&'static str),
}

pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        requirement,
    }
}
