use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("budget {budget} is too small: at least {required} stored edges are needed")]
    BudgetTooSmall { budget: u64, required: u64 },

    #[error("stream is longer than the declared {declared} edges and the budget {budget} cannot cover it")]
    StreamLongerThanDeclared { declared: u64, budget: u64 },

    #[error("graph has {n} vertices, above the exact oracle limit of {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),

    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),

    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("cannot compare a {0} descriptor with a {1} descriptor")]
    MethodMismatch(String, String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by the input data rather than by how the
    /// library was called.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::OracleLimit { .. }
                | Error::DuplicateEdge(..)
                | Error::SelfLoop(_)
                | Error::Parse { .. }
                | Error::Dataset(_)
                | Error::Io { .. }
                | Error::Empty(_)
                | Error::StreamLongerThanDeclared { .. }
                | Error::BudgetTooSmall { .. }
        )
    }
}
