//! Compressed suffix arrays.
//!
//! [`CsaPsi`] stores Psi as per-symbol Elias-Fano sequences and searches by
//! rank over them; [`CsaWt`] stores the BWT in a Huffman-shaped wavelet tree
//! and searches with LF. Both locate through [`SaSamples`].

mod alphabet;
mod psi;
mod sampling;
mod wt;

pub use alphabet::Alphabet;
pub use psi::{CsaPsi, PsiSequences};
pub use sampling::{SaSamples, SampleKind};
pub use wt::CsaWt;

use crate::error::{out_of_range, Result};

/// Sampling rate of the SADA full-text index.
pub const SADA_SA_RATE: usize = 32;
/// Sampling rate of the GREEDY and SORT full-text indexes.
pub const SPARSE_SA_RATE: usize = 1 << 20;

/// Operations shared by both suffix array representations.
pub trait SuffixArrayIndex {
    /// Text length `n`.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn alphabet(&self) -> &Alphabet;

    /// Half-open range `[sp, ep)` of suffixes prefixed by `pattern`.
    fn range(&self, pattern: &[u64]) -> (usize, usize);

    /// Inclusive `[sp, ep]`, `None` when the pattern does not occur.
    fn backward_search(&self, pattern: &[u64]) -> Option<(usize, usize)> {
        let (sp, ep) = self.range(pattern);
        (ep > sp).then(|| (sp, ep - 1))
    }

    fn count(&self, pattern: &[u64]) -> usize {
        let (sp, ep) = self.range(pattern);
        ep - sp
    }

    /// `SA[i]`.
    fn sa(&self, i: usize) -> Result<usize>;

    /// `ISA[p]`.
    fn isa(&self, p: usize) -> Result<usize>;

    /// `T[l..=r]`.
    fn extract(&self, l: usize, r: usize) -> Result<Vec<u64>>;
}

pub(crate) fn check_extract(l: usize, r: usize, n: usize) -> Result<()> {
    if r >= n {
        return Err(out_of_range(r, n));
    }
    if l > r {
        return Err(out_of_range(l, r + 1));
    }
    Ok(())
}
