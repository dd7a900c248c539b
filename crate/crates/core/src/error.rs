use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function (pole, divergent integral).
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters for which the chosen numerical method is not applicable.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// A numerical method stopped before reaching its target accuracy.
    #[error("accuracy target {target:e} not reached (estimated error {estimate:e}){context}")]
    Accuracy {
        estimate: f64,
        target: f64,
        context: String,
    },

    /// Query outside the support of a data-driven model (no extrapolation).
    #[error("out of range: {0}")]
    Range(String),

    /// A model parameter violates its invariant. `field` is a dotted path.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    /// Malformed absorption table.
    #[error("absorption table, line {line}: {reason}")]
    TableFormat { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Attach diagnostic context to accuracy and unsupported-parameter errors.
    pub fn with_context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::Accuracy {
                estimate,
                target,
                context,
            } => Error::Accuracy {
                estimate,
                target,
                context: format!("{context} [{ctx}]"),
            },
            Error::Unsupported(msg) => Error::Unsupported(format!("{msg} [{ctx}]")),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Reject non-finite or non-positive values.
pub(crate) fn require_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}
