use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation needed more truncated data than the input carries.
    #[error("insufficient bound: {op} needs bound >= {needed}, input has {actual}")]
    InsufficientBound {
        op: &'static str,
        needed: usize,
        actual: usize,
    },

    /// A budgeted enumeration ran out of budget before closing.
    #[error("enumeration budget of {budget} table rows exhausted{}", at.as_deref().map(|s| format!(" at {s}")).unwrap_or_default())]
    Unbounded { budget: usize, at: Option<String> },

    /// Input data failed structural validation.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A quotient that should have been the multinerve of a groupoid is not.
    #[error("not a multinerve: {0}")]
    NotMultinerve(String),

    /// An operation requiring a weakly globular input got something else.
    #[error("not weakly globular: {0}")]
    NotWeaklyGlobular(String),

    /// A guaranteed horn lift could not be found (would falsify the
    /// fibrancy proposition on this instance).
    #[error("missing lift: {0}")]
    MissingLift(String),

    /// Malformed JSON or schema violation on load.
    #[error("input format: {0}")]
    Format(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
