//! Text construction and the arrays derived from its suffix array.
//!
//! A collection `d_0 .. d_{N-1}` becomes `T = d_0 # ... d_{N-1} # $` with
//! `$ = 0`, `# = 1` and document symbols from 2 up.

pub mod collection;
pub mod sa;
pub mod stream;

pub use collection::{
    map_pattern, render_symbols, Collection, CollectionMeta, Mode, Vocabulary, BYTE_SIGMA, FIRST_SYMBOL,
    SEPARATOR, TERMINATOR,
};
pub use sa::{build_sa, inverse, DiskSymbols, SuffixSorter, SymbolSource};
pub use stream::{
    bwt, bwt_streaming, doc_array, doc_array_streaming, doc_isas, local_isa, next_occurrence, prev_occurrence,
    psi_from_bwt, psi_from_bwt_file, psi_from_sa, symbol_counts,
};
