use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("exp({z})·Φ({w}) overflows f64")]
    Overflow { z: f64, w: f64 },

    #[error(
        "quadrature did not converge: error estimate {error_estimate:.3e} above tolerance \
         {tolerance:.3e}; worst subinterval [{worst_lo}, {worst_hi}]"
    )]
    NonConvergence {
        error_estimate: f64,
        tolerance: f64,
        worst_lo: f64,
        worst_hi: f64,
    },

    #[error("integrand is not finite at x = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("simulation budget exceeded: {requested} grid steps requested, budget is {budget}")]
    Resource { requested: u128, budget: u128 },

    #[error("empty sample")]
    EmptyInput,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::NonFiniteIntegrand { .. } | Error::Overflow { .. }
        )
    }
}
