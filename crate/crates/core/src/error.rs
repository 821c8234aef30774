use thiserror::Error;

use crate::numerics::ComplexValue;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at z = {0}")]
    GammaPole(ComplexValue),

    #[error("denominator parameter {param} hits a pole at term {term}")]
    DenominatorPole { param: ComplexValue, term: usize },

    #[error("series with p = {p} > q + 1 = {q_plus_one} does not terminate")]
    Divergent { p: usize, q_plus_one: usize },

    #[error("series did not converge within {terms} terms (last |term| = {last_term:e})")]
    SeriesNotConverged { terms: usize, last_term: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {evaluations} evaluations (error estimate {error_estimate:e})")]
    QuadratureNotConverged { evaluations: usize, error_estimate: f64 },

    #[error("integrand returned a non-finite value at x = {abscissa}")]
    Integrand { abscissa: f64 },

    #[error("cannot lift a = {0} into the integrable region")]
    LiftFailure(ComplexValue),

    #[error("prefactor pole: {0}")]
    PrefactorPole(String),

    #[error("no closed form matches {0}")]
    NoClosedForm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
