use thiserror::Error;

/// Errors from parameter validation, simulation and the linear solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameter validation failed; the message states the violated constraint.
    #[error("invalid parameters: {constraint}")]
    InvalidParameters { constraint: String },

    /// A simulated value left the representable range. Trajectories are legal
    /// output up to (not including) `index`.
    #[error("non-finite value at index {index}: the trajectory is explosive beyond working precision")]
    NonFinite { index: usize },

    /// The matrix is numerically singular under the scale-aware threshold.
    #[error("singular matrix: |det| = {det:.3e} is at or below the threshold {threshold:.3e}")]
    SingularMatrix { det: f64, threshold: f64 },

    /// A closed-form equilibrium was requested for a rank-deficient system.
    #[error("equilibrium system is rank deficient (1 - c1 - c2 = 0); use the regularized solver")]
    RankDeficient,

    /// The regularization strength is outside the open interval (0, 1).
    #[error("regularization strength must satisfy 0 < theta < 1, got {theta:e}")]
    InvalidTheta { theta: f64 },

    /// The regularized normal equations are numerically singular: the given
    /// theta underflows the working precision and cannot lift the rank
    /// deficiency.
    #[error("regularized normal equations are numerically singular: theta = {theta:.3e} underflows working precision")]
    RegularizationUnderflow { theta: f64 },
}

impl Error {
    /// Stable machine-readable code, used by the CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameters { .. } => "invalid-parameters",
            Error::NonFinite { .. } => "non-finite-value",
            Error::SingularMatrix { .. } => "singular-matrix",
            Error::RankDeficient => "rank-deficient",
            Error::InvalidTheta { .. } => "invalid-theta",
            Error::RegularizationUnderflow { .. } => "regularization-underflow",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
