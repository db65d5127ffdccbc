use thiserror::Error;

/// Errors produced by the pipeline stages.
///
/// The CLI maps these onto exit codes: configuration problems are usage
/// errors (2), bad or missing data is a data error (3), and violated
/// internal invariants are reported separately (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid UTF-8 in {path} at byte offset {offset}")]
    InvalidEncoding { path: String, offset: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("cosine similarity undefined for a zero vector (word {word:?})")]
    ZeroVector { word: String },

    #[error("cosine similarity undefined for a zero vector")]
    UndefinedSimilarity,

    #[error("no IPA transcription for word {word:?}")]
    MissingTranscription { word: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
