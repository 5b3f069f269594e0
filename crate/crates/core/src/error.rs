use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("no words survive min_count {min_count}")]
    EmptyVocabulary { min_count: u64 },

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("vocabulary has {0} words; at least 2 are needed for a Huffman tree")]
    VocabularyTooSmall(usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("missing parameter {0}")]
    MissingParameter(&'static str),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("out-of-vocabulary word(s): {}", .0.join(", "))]
    OutOfVocabulary(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed vector file at byte {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("cannot represent word {0:?} in a vector file")]
    UnrepresentableWord(String),

    #[error("checkpoint format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("corrupted checkpoint section {section}: {message}")]
    CorruptSection { section: String, message: String },
}
