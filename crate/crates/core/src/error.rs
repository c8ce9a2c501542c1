use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {order} exceeds the configured bound {bound}")]
    FieldTooLarge { order: u64, bound: u64 },
    #[error("no irreducible polynomial of degree {k} over F_{p}")]
    NoIrreducible { p: u32, k: u32 },
    #[error("matrix is not a unit: its residue reduction is singular")]
    NotAUnit,
    #[error("{what} has size {size}, over the bound {bound}")]
    SizeLimit { what: String, size: u64, bound: u64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
