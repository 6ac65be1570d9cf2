use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected} variables, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected degree {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("transposition index {index} is invalid for rank {k}")]
    InvalidTransposition { k: usize, index: usize },
    #[error("{what} requires rank in {min}..={max}, got {k}")]
    UnsupportedRank {
        what: &'static str,
        k: usize,
        min: usize,
        max: usize,
    },
    #[error("truncation level {level} is too small; need more than {min}")]
    LevelTooSmall { level: u32, min: u32 },
    #[error("Kameko map needs n >= k and n - k even, got k={k}, n={n}")]
    KamekoParity { k: usize, n: u32 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit status for this error: 2 bad arguments, 3 bad polynomial
    /// input, 4 cache or file I/O, 5 unsupported rank.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse(_) | Error::DegreeMismatch { .. } | Error::NotHomogeneous | Error::RankMismatch { .. } => 3,
            Error::Cache(_) | Error::Io { .. } => 4,
            Error::UnsupportedRank { .. } => 5,
            Error::IndexOutOfRange { .. }
            | Error::InvalidTransposition { .. }
            | Error::LevelTooSmall { .. }
            | Error::KamekoParity { .. } => 2,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file has an unknown magic/version tag")]
    VersionMismatch,
    #[error("cache file is truncated")]
    Truncated,
    #[error("cache checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    Checksum { stored: u64, computed: u64 },
    #[error("cache file is for k={found_k}, n={found_n}, not k={k}, n={n}")]
    WrongParameters {
        k: usize,
        n: u32,
        found_k: usize,
        found_n: u32,
    },
    #[error("cache file content is inconsistent: {0}")]
    Malformed(&'static str),
    #[error("cache I/O error: {0}")]
    Io(#[from] std::io::Error),
}
