use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument outside the slab: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    /// Quadrature did not settle within the node budget.
    #[error(
        "quadrature did not converge with {nodes} nodes: last estimates {previous:e} and {last:e}"
    )]
    Accuracy {
        nodes: usize,
        previous: f64,
        last: f64,
    },

    #[error("cosine overlap {overlap:e} is too small to normalize (reshape the bump)")]
    NearZeroOverlap { overlap: f64 },

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Rejects non-finite or non-positive values.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}
