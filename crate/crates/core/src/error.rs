use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that requires a non-empty input received an empty one.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A parameter violated its documented range or constraint.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Registration could not proceed (no correspondences, or all
    /// correspondences collinear/coincident).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// Bin localization did not converge.
    #[error("bin localization failed (residual {residual:.6} m)")]
    Localization { residual: f64 },

    /// The cropped cloud is too small to estimate poses from.
    #[error("insufficient data: {got} points, need at least {need}")]
    InsufficientData { got: usize, need: usize },

    /// No classified candidate survived ordering; the caller should re-scan.
    #[error("no feasible grasp candidate")]
    NoFeasibleGrasp,

    /// Scene generation ran out of placement retries.
    #[error("bin capacity exceeded: placed {placed} of {requested} objects")]
    Capacity { placed: usize, requested: usize },

    /// A text file (scene, config, robot model, grasp set, mesh) failed to parse.
    #[error("parse error in {path} (line {line}): {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(path: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
