use thiserror::Error;

/// Errors raised while building or loading an index.
#[derive(Debug, Error)]
pub enum Error {
    #[error("query set needs at least 2 distinct members, got {0}")]
    InvalidQuery(usize),

    #[error("predecessor keys must be strictly increasing and within [2, {bound}]: {reason}")]
    InvalidKeys { bound: u64, reason: String },

    #[error("invalid gadget parameters: {0}")]
    InvalidGadget(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Failures decoding a serialized index. Each corruption class gets its own variant.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic {0:?}, expected \"COOC\"")]
    BadMagic([u8; 4]),

    #[error("unsupported format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("stream truncated while reading {0}")]
    Truncated(&'static str),

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("{0} trailing bytes after checksum")]
    TrailingBytes(usize),

    #[error("decoded fields are inconsistent: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
