use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("node id {id} out of range (graph has {n_nodes} nodes)")]
    NodeOutOfRange { id: usize, n_nodes: usize },

    #[error("{what}: expected {expected} rows, found {found}")]
    RowCountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what}: non-binary label value {value} at row {row}")]
    NonBinaryLabel {
        what: &'static str,
        row: usize,
        value: f64,
    },

    #[error("pair ({0}, {1}) is not in the pair set")]
    UnknownPair(usize, usize),

    #[error("{}negative feature value {value}; preprocess with a non-negative shift", pair.map(|p| format!("pair {p}: ")).unwrap_or_default())]
    NegativeFeature { pair: Option<usize>, value: f64 },

    #[error("non-finite value in {stage} at epoch {epoch}, batch {batch}")]
    Diverged {
        stage: &'static str,
        epoch: usize,
        batch: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("unknown translator `{0}` (expected sum, mean, max or min)")]
    UnknownTranslator(String),

    #[error("{0} labels are not present")]
    MissingLabels(&'static str),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Undefined(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("cannot sample {wanted} non-edges: only {available} candidate node pairs remain")]
    NegativeSampling { wanted: usize, available: usize },

    #[error("empty dataset: {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
