use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must be strictly positive, entry ({row},{col}) = {value}")]
    NotPositive { row: usize, col: usize, value: f64 },

    #[error("simplex exceeded its iteration limit of {0}")]
    IterationLimit(usize),

    #[error("LP solution violates feasibility by {residual:e} (tolerance {tolerance:e})")]
    InaccurateSolution { residual: f64, tolerance: f64 },

    #[error("linear program unexpectedly {0}")]
    UnexpectedLpStatus(&'static str),

    #[error("support enumeration is limited to 5x5 games, got {rows}x{cols}")]
    OracleSizeLimit { rows: usize, cols: usize },

    #[error("support enumeration found no equilibrium support")]
    NoValidSupport,

    #[error("duality gap {gap:e} exceeds tolerance {tolerance:e}")]
    DualityGap { gap: f64, tolerance: f64 },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("Gordan alternative inconsistent: kernel branch {kernel}, image branch {image}")]
    GordanInconsistent { kernel: bool, image: bool },

    #[error("invalid ensemble spec: {0}")]
    InvalidEnsemble(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that point at a numerical or logic failure rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::IterationLimit(_)
                | Error::InaccurateSolution { .. }
                | Error::UnexpectedLpStatus(_)
                | Error::NoValidSupport
                | Error::DualityGap { .. }
                | Error::NonConvergence { .. }
                | Error::GordanInconsistent { .. }
        )
    }
}
