use thiserror::Error;

/// Errors raised by rotation constructors, conversions and the registration solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RotError {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("not a rotation: orthogonality residual {orthogonality:e}, determinant residual {determinant:e}")]
    InvalidRotation { orthogonality: f64, determinant: f64 },

    #[error("quaternion norm {norm} is more than 1e-6 away from 1")]
    NotUnit { norm: f64 },

    #[error("unsupported Euler convention {0}")]
    UnsupportedConvention(String),

    #[error("rank-deficient parameter matrix (rank {rank})")]
    RankDeficient { rank: usize },

    #[error("mode is not unique: leading concentrations tie at {0}")]
    NonUniqueMode(f64),

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("invalid Bingham parameters: {0}")]
    InvalidBingham(String),

    #[error("point sets differ in size: {source_len} vs {target_len}")]
    SizeMismatch { source_len: usize, target_len: usize },

    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("degenerate correspondences at ICP iteration {iteration}: {reason}")]
    DegenerateIteration { iteration: usize, reason: String },

    #[error("interpolation failed at t = {t}: {reason}")]
    Interpolation { t: f64, reason: String },

    #[error("unknown representation `{0}`")]
    UnknownRepresentation(String),

    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, RotError>;
