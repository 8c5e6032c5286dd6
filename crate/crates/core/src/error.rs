use std::io;

use thiserror::Error;

/// Errors produced by building, querying or (de)serializing structures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} does not fit in {width} bits")]
    ValueRange { value: u64, width: u8 },

    #[error("invalid bit width {0} (expected 1..=64)")]
    InvalidWidth(u8),

    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported RRR block size {0} (expected 15, 31 or 63)")]
    UnsupportedBlockSize(usize),

    #[error("positions must be strictly increasing and below the universe")]
    UnsortedPositions,

    #[error("symbol {symbol} outside alphabet of size {sigma}")]
    SymbolRange { symbol: u64, sigma: u64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("reserved byte 0x{0:02x} in byte-mode document")]
    ReservedSymbol(u8),

    #[error("bad file format: {0}")]
    Format(String),

    #[error("memory monitor: {0}")]
    Monitor(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(index: usize, limit: usize) -> Error {
    Error::OutOfRange { index, limit }
}
