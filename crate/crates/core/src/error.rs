use std::path::PathBuf;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("objective is not differentiable at the starting point")]
    NondifferentiableStart,

    /// The line search kept doubling without finding a bracket; the objective
    /// is unbounded below along the search direction.
    #[error("line search hit the doubling cap at iteration {iteration}: objective unbounded along direction")]
    UnboundedAlongDirection { iteration: usize },

    #[error("|x1| = {x1} is within the dyadic guard band of {boundary}")]
    DyadicBoundary { x1: f64, boundary: f64 },

    #[error("no step prediction for tau = {tau} > 0")]
    PositiveTau { tau: f64 },

    #[error("hard point coordinates overflow for n = {0} (max 62)")]
    HardPointOverflow(usize),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
