use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid mismatch: field has {found} values, grid has {expected} nodes")]
    GridMismatch { expected: usize, found: usize },

    #[error("degenerate metric: phi = {value:e} at interior node {node}")]
    DegenerateMetric { node: usize, value: f64 },

    #[error("degenerate boundary: phi(1) = {0:e}")]
    DegenerateBoundary(f64),

    #[error("preset `{preset}` rejected: Ricci curvature not positive at node {node} (a = {a:.6e}, b = {b:.6e})")]
    PresetRejected {
        preset: String,
        node: usize,
        a: f64,
        b: f64,
    },

    #[error("pinching undefined: scalar curvature R = {r:e} <= 0 at node {node}")]
    PinchingUndefined { node: usize, r: f64 },

    #[error("fit window: {0}")]
    FitWindow(String),

    #[error("config line {line}: key `{key}`: {msg}")]
    Config {
        line: usize,
        key: String,
        msg: String,
    },

    #[error("schema error in {file}: {msg}")]
    Schema { file: String, msg: String },

    #[error("study aborted at n = {n_cells}: {msg}")]
    StudyAborted { n_cells: usize, msg: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
