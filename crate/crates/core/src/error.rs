use thiserror::Error;

pub type Result<T> = std::result::Result<T, StereoError>;

#[derive(Debug, Error)]
pub enum StereoError {
    /// An input violates a documented precondition.
    #[error("{0}")]
    InvalidInput(String),

    #[error("disparity must be ≥ 1 (got {0}); range is undefined")]
    NonPositiveDisparity(i64),

    #[error("projection undefined: point is behind the camera")]
    ProjectionUndefined,

    #[error("measured disparity {0} px is not positive; range diverges")]
    Divergent(f64),

    #[error("block matcher found no overlapping pixels for any candidate disparity")]
    NoOverlap,

    #[error("timestamps must be strictly increasing per target")]
    NonIncreasingTime,

    #[error("malformed PGM: {0}")]
    Pgm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scene file: {0}")]
    SceneFile(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl StereoError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        StereoError::InvalidInput(msg.into())
    }

    /// Process exit code for the command-line front end: 1 for bad input,
    /// 2 for failures during computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            StereoError::InvalidInput(_)
            | StereoError::NonPositiveDisparity(_)
            | StereoError::NonIncreasingTime
            | StereoError::Pgm(_)
            | StereoError::SceneFile(_) => 1,
            StereoError::ProjectionUndefined
            | StereoError::Divergent(_)
            | StereoError::NoOverlap
            | StereoError::Io(_)
            | StereoError::Csv(_) => 2,
        }
    }
}
