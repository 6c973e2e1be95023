use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Aberth iteration did not reach the residual tolerance.
    #[error("root solver did not converge after {iterations} iterations (max residual {max_residual:e})")]
    RootSolver {
        iterations: usize,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
        max_residual: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// True for solver/optimizer failures, false for bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::RootSolver { .. } | Error::Numerical(_))
    }
}
