use thiserror::Error;

/// Errors raised by set construction, projections, solvers and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("reference point is not a fixed point: |R(u) - u| = {residual:e}")]
    NotFixedPoint { residual: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("{field}: {source}")]
    InField {
        field: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Attaches the name of the offending field.
    pub fn in_field(self, field: impl Into<String>) -> Error {
        Error::InField { field: field.into(), source: Box::new(self) }
    }

    /// The innermost error, with field context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InField { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
