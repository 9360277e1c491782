use thiserror::Error;

/// Errors produced by index construction, lookup, and the wire protocol.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("unsupported format: {extension:?}")]
    UnsupportedFormat { extension: String },

    #[error("empty dictionary")]
    EmptyDictionary,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid credentials: {0}")]
    InvalidCredentials(String),

    #[error("invalid b-tree order {0}: order must be at least 3")]
    InvalidOrder(usize),

    #[error("duplicate key {0}")]
    DuplicateKey(String),

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("malformed ciphertext: {0}")]
    MalformedCiphertext(String),

    #[error("decryption failed: {0}")]
    DecryptionFailed(String),

    #[error("index format error: {0}")]
    Format(String),

    #[error("wire protocol error: {0}")]
    Wire(String),
}

pub type Result<T> = std::result::Result<T, Error>;
