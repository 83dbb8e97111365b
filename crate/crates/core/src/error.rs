use std::path::PathBuf;

use crate::dataset::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("dataset failed validation: {}", .0.summary())]
    Validation(ValidationReport),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("value outside the model domain: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no observations at or above xmin = {xmin} (sample maximum {max})")]
    EmptyTail { xmin: f64, max: f64 },

    #[error("insufficient tail: {found} observations at or above {xmin}, need at least {needed}")]
    InsufficientTail {
        xmin: f64,
        needed: usize,
        found: usize,
    },

    #[error(
        "{what} did not converge after {evaluations} evaluations \
         (best objective {best_value}, simplex diameter {diameter:e}, best point {best_point:?})"
    )]
    NonConvergence {
        what: String,
        best_point: Vec<f64>,
        best_value: f64,
        evaluations: usize,
        diameter: f64,
    },
}

impl Error {
    /// Process exit code for the command-line front end: 2 for bad input or
    /// usage, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Validation(_)
            | Error::InvalidArgument(_) => 2,
            Error::EmptySample(_)
            | Error::Domain(_)
            | Error::Degenerate(_)
            | Error::EmptyTail { .. }
            | Error::InsufficientTail { .. }
            | Error::NonConvergence { .. } => 3,
        }
    }
}
