use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max entry deviation {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("eigenvalue/singular-value iteration failed to converge")]
    ConvergenceFailure,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("lambda {lambda} exceeds the Schmidt rank bound {m_eff}; the input state is corrupt")]
    LambdaExceedsSchmidtRank { lambda: f64, m_eff: usize },

    #[error("ensemble size {ensemble_size} is smaller than the state rank {rank}")]
    RankDeficiency { ensemble_size: usize, rank: usize },

    #[error("unknown state family `{0}`")]
    UnknownFamily(String),

    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error("invariant violation: {invariant} (deviation {deviation:e})")]
    InvariantViolation { invariant: String, deviation: f64 },
}

impl Error {
    pub(crate) fn invariant(invariant: impl Into<String>, deviation: f64) -> Self {
        Error::InvariantViolation {
            invariant: invariant.into(),
            deviation,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::ParameterOutOfRange(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
