use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("dimension {dim} exceeds the maximum of {max}")]
    DimensionOverflow { dim: usize, max: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("levels must differ (got {0} twice)")]
    SameLevel(usize),

    #[error("level index {index} out of range for dimension {dim}")]
    LevelOutOfRange { index: usize, dim: usize },

    #[error("protocol stage {found:?} where {expected:?} was required")]
    WrongStage { expected: crate::gate::Stage, found: crate::gate::Stage },

    #[error("probabilities sum to {0}, not 1")]
    ProbabilitySum(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pulse program parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
