use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A censoring scheme violated its defining identity or bounds.
    #[error("invalid censoring scheme: {0}")]
    InvalidScheme(String),

    /// A distribution parameter or function argument was out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Observed data failed validation (ordering, positivity, parse).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// The alternating partial-fraction sum for entropy term `j` lost all
    /// significant digits and came out nonpositive. Signals a scheme beyond
    /// the supported cancellation range.
    #[error("numerical cancellation in entropy term j={j}: inner sum nonpositive after compensated summation")]
    NumericalCancellation { j: usize },

    /// Adaptive quadrature hit its subdivision limit before reaching the
    /// requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// One or more Monte Carlo replicates failed; the run is aborted.
    #[error("{failed} of {reps} Monte Carlo replicates failed; first failure: {first}")]
    ReplicateFailures {
        failed: usize,
        reps: usize,
        first: Box<Error>,
    },

    /// select_window was called with no candidate windows.
    #[error("empty window candidate set")]
    EmptyCandidates,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors of the "numeric failure" class (CLI exit code 3);
    /// everything else is treated as an input error (exit code 2).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NumericalCancellation { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::ReplicateFailures { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
