use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("empty matrix or vector")]
    Empty,

    #[error("matrix is singular (estimated condition {condition:e})")]
    SingularMatrix { condition: f64 },

    #[error("eigenvalue iteration did not converge")]
    ConvergenceFailure,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("polynomial matrix is identically singular")]
    IdenticallySingular,

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("no variety points found")]
    NoPointsFound,

    #[error("insufficient roots: need {needed}, have {available}")]
    InsufficientRoots { needed: usize, available: usize },

    #[error("transform singular after {attempts} attempts")]
    TransformSingular { attempts: usize },

    #[error("candidate is not a solution (residual {residual:e})")]
    NotASolution { residual: f64 },

    #[error("factorization identity failed (relative gap {gap:e})")]
    FactorCheckFailed { gap: f64 },

    #[error("matrices are not simultaneously diagonalizable (off-diagonal {off_diagonal:e})")]
    NotSimultaneouslyDiagonalizable { off_diagonal: f64 },

    #[error("non-integer coefficient {value} in exact oracle input")]
    NonIntegerInput { value: String },

    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
