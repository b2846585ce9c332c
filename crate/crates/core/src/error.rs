use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SfgError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series did not converge within {terms} terms (partial value {partial:e}, last term {last_term:e})")]
    NoConvergence { terms: usize, partial: f64, last_term: f64 },

    #[error("no efficiency peak for p in (0, {p_max}] at q = {q}, T = {t_delay}")]
    NoPeak { q: f64, t_delay: f64, p_max: f64 },

    #[error("fidelity undefined: upconversion probability {efficiency:e} is below 1e-12")]
    UndefinedFidelity { efficiency: f64 },

    #[error("purity undefined: {0}")]
    UndefinedPurity(&'static str),

    #[error("afocal configuration (denominator {denominator:e}); use the time-to-frequency mode instead")]
    Afocal { denominator: f64 },

    #[error("degenerate design: {0}")]
    Degenerate(&'static str),

    #[error("grid too small: captured energy {captured} misses the budget by {missing:e}")]
    GridTooSmall { captured: f64, missing: f64 },

    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e}, error {error:e})")]
    Quadrature { tolerance: f64, estimate: f64, error: f64 },

    #[error("series evaluation loses precision at p = {p} (crossover {crossover}); use the quadrature or grid route")]
    PrecisionLoss { p: f64, crossover: f64 },
}

pub type Result<T> = std::result::Result<T, SfgError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> SfgError {
    SfgError::InvalidParameter { name, reason: reason.into() }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
