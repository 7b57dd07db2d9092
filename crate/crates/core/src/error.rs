use thiserror::Error;

/// Errors produced by the interference models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the model.
    #[error("invalid `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// Path legs or loop geometry are inconsistent.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Tabulated input data is malformed.
    #[error("data error: {0}")]
    Data(String),

    /// Adaptive quadrature stopped before reaching its tolerance.
    #[error(
        "quadrature did not converge: error estimate {achieved:e} exceeds target {target:e} \
         after {panels} panels"
    )]
    NonConvergent {
        achieved: f64,
        target: f64,
        panels: usize,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
