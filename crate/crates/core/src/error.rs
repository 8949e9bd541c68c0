use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the mining pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("line {line}: duplicate token index {index} in sentence")]
    DuplicateToken { line: usize, index: usize },

    #[error("pair {pair}: {message}")]
    Alignment { pair: String, message: String },

    #[error("{found} alignment lines for {expected} sentence pairs")]
    AlignmentCount { found: usize, expected: usize },

    #[error("{file}, line {line}: {message}")]
    Resource {
        file: String,
        line: usize,
        message: String,
    },

    #[error("cycle in hypernym edges: {}", .0.join(" -> "))]
    TaxonomyCycle(Vec<String>),

    #[error("sense {0} appears in hypernym edges but has no lemma entry")]
    DanglingSense(String),

    #[error("ill-posed goodness-of-fit test: {0}")]
    IllPosedTest(String),

    #[error("no training data")]
    EmptyData,

    #[error("example reference {sentence}#{token} does not resolve to a stored sentence")]
    UnresolvedExample { sentence: String, token: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
