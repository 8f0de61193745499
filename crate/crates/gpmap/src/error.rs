use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the census, analysis and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol {symbol} is outside the alphabet [0, {alphabet})")]
    SymbolOutOfRange { symbol: u32, alphabet: u8 },

    #[error("letter '{letter}' at position {position} is not one of the first {alphabet} letters a..z")]
    BadLetter {
        letter: char,
        position: usize,
        alphabet: u8,
    },

    #[error("rank {rank} is outside the sequence space [0, {total})")]
    RankOutOfRange { rank: u64, total: u64 },

    #[error(
        "sequence space {alphabet}^{length} does not fit in a 64-bit rank; \
         length * log2(alphabet) must be <= 63"
    )]
    SpaceTooLarge { length: u32, alphabet: u8 },

    #[error("alphabet size {0} exceeds 26; genomes are written with the letters a..z")]
    AlphabetTooLarge(u32),

    #[error("unknown instruction set '{0}'")]
    UnknownIsa(String),

    #[error("rank {0} is not in the viable set")]
    NotViable(u64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("shard coverage error: {0}")]
    ShardCoverage(String),

    #[error("checksum mismatch for {file}: expected {expected}, found {actual}")]
    ChecksumMismatch {
        file: String,
        expected: String,
        actual: String,
    },

    #[error("output {0} already exists (pass --force to overwrite)")]
    OutputExists(PathBuf),

    #[error("checkpoint at {path} was written for a different configuration ({detail}); refusing to resume")]
    CheckpointMismatch { path: PathBuf, detail: String },

    #[error("census file {0} is malformed: {1}")]
    MalformedCensus(PathBuf, String),

    #[error("unknown cluster component {0}")]
    UnknownComponent(u64),

    #[error("verification failed: {failed} of {total} checks")]
    VerificationFailed { failed: usize, total: usize },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
