//! Composable succinct data structures and top-k document retrieval.
//!
//! The crate is layered: bit-packed integer vectors and bitvectors with
//! rank/select ([`intvec`], [`bitvec`], [`compressed`]) feed wavelet trees
//! ([`wavelet`]) and range-minimum structures ([`rmq`]); those build the
//! compressed suffix arrays in [`csa`]; and [`docindex`] composes everything
//! into the SADA, GREEDY and SORT document retrieval indexes. Construction
//! helpers live in [`construct`], and [`tooling`] carries the memory
//! monitor, size reports, pattern generation and benchmarking; [`synth`]
//! generates seeded test corpora.

pub mod bitvec;
pub mod compressed;
pub mod construct;
pub mod csa;
pub mod docindex;
pub mod error;
pub mod intvec;
pub mod persist;
pub mod rmq;
pub mod synth;
pub mod tooling;
pub mod wavelet;

pub use error::{Error, Result};
