use thiserror::Error;

/// Errors produced by the simulation and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input data, such as a field whose length does not match the grid.
    #[error("input error: {0}")]
    Input(String),

    /// A parameter outside the domain where an operation is defined.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Invalid or inconsistent run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A precondition of an analysis routine does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Singular systems, non-finite values, eigensolver failures.
    #[error("numerical error{}: {message}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    Numerical { message: String, step: Option<usize> },

    /// Not enough usable samples for a least-squares fit.
    #[error("fit error: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn numerical(message: impl Into<String>) -> Self {
        Error::Numerical {
            message: message.into(),
            step: None,
        }
    }

    pub(crate) fn numerical_at(message: impl Into<String>, step: usize) -> Self {
        Error::Numerical {
            message: message.into(),
            step: Some(step),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
