use thiserror::Error;

use crate::orthogonalizer::{PreparationResult, PreparationTrace};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed something outside an operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A dense construction would exceed the configured size cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("rank deficiency: pivot norm {pivot_norm:.3e} at column {column}")]
    Degeneracy { column: usize, pivot_norm: f64 },

    #[error("no convergence for basis state {k} within {max_m} iterations")]
    Convergence {
        k: usize,
        max_m: usize,
        trace: Box<PreparationTrace>,
    },

    /// A batch preparation stopped early; completed states are attached.
    #[error("preparation stopped after {} of the basis states: {source}", partial.basis.len())]
    Incomplete {
        partial: Box<PreparationResult>,
        source: Box<Error>,
    },

    #[error("run-count recurrence diverges: zero success probability at stage {stage}")]
    Divergence { stage: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::Resource(_) => "resource",
            Error::Degeneracy { .. } => "degeneracy",
            Error::Convergence { .. } => "convergence",
            Error::Incomplete { .. } => "incomplete",
            Error::Divergence { .. } => "divergence",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    /// Process exit status for this error (1 is reserved for failed checks).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) => 2,
            Error::Resource(_) => 3,
            Error::Degeneracy { .. } | Error::Convergence { .. } | Error::Divergence { .. } => 4,
            Error::Incomplete { source, .. } => source.exit_code(),
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 5,
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
