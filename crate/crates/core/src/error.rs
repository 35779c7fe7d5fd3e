use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("point ({x}, {y}) lies outside the area [0, {side}]^2")]
    OutOfBounds { x: f64, y: f64, side: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("invalid matrix entry at ({row}, {col}): {msg}")]
    InvalidEntry { row: usize, col: usize, msg: String },

    #[error("too many points for the exhaustive oracle: {got} > {max}")]
    TooManyPoints { got: usize, max: usize },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
