use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("duplicate id: {0}")]
    DuplicateId(String),

    #[error("document {id} is not valid UTF-8 ({})", path.display())]
    NotUtf8 { id: String, path: PathBuf },

    #[error("document {0} is empty")]
    EmptyDocument(String),

    #[error("manifest {}: line {line}: {message}", path.display())]
    Manifest { path: PathBuf, line: u64, message: String },

    #[error("token stream is empty")]
    EmptyStream,

    #[error("a network needs at least 2 tokens, got {0}")]
    StreamTooShort(usize),

    #[error("unknown vertex: {0}")]
    UnknownVertex(String),

    #[error("network has no vertices")]
    EmptyNetwork,

    #[error("network has no edges")]
    Edgeless,

    #[error("network is disconnected; average path length is undefined in strict mode")]
    Disconnected,

    #[error("vertex {0} has no reachable vertices")]
    IsolatedVertex(String),

    #[error("partition covers {got} vertices, network has {expected}")]
    PartitionSize { expected: usize, got: usize },

    #[error("baseline list is empty")]
    EmptyBaseline,

    #[error("requested {requested} top words but only {available} distinct tokens exist")]
    NotEnoughWords { requested: usize, available: usize },

    #[error("invalid feature specification: {0}")]
    InvalidSpec(String),

    #[error("feature matrix: {0}")]
    Matrix(String),

    #[error("need at least 2 rows to cluster, got {0}")]
    TooFewRows(usize),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("row has {got} features, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("class {class} has {rows} rows; need more than {train_per_class}")]
    ClassTooSmall {
        class: String,
        rows: usize,
        train_per_class: usize,
    },

    #[error("document {0} has no publication year")]
    MissingYear(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        if source.kind() == std::io::ErrorKind::NotFound {
            return Error::FileNotFound(path.into());
        }
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
