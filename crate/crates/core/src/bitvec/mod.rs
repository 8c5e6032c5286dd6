//! Bitvectors and the access/rank/select contract shared by every backend.
//!
//! Conventions used throughout the crate:
//!
//! - `rank1(i)` counts ones in the half-open prefix `[0, i)`, so `rank1(0) = 0`
//!   and `rank1(len)` is the total number of ones.
//! - `select1(j)` is 1-indexed and returns the 0-based position of the `j`-th
//!   one, so `rank1(select1(j)) = j - 1`.

mod plain;
mod rank;
mod select;

use std::fmt;
use std::io::{Read, Write};

pub use plain::PlainBitVector;
pub use rank::RankSupport;
pub use select::SelectSupport;

use crate::error::{out_of_range, Error, Result};
use crate::intvec::IntVector;
use crate::persist::{CountingWriter, Persist};
use crate::tooling::size::SizeTree;

/// Access, rank and select over a static bit sequence.
pub trait BitRank {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bit `i`. Panics when `i >= len`.
    fn access(&self, i: usize) -> bool;

    /// Ones in `[0, i)`. Panics when `i > len`.
    fn rank1(&self, i: usize) -> usize;

    fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position of the `j`-th one (`j ≥ 1`), or `None` if there is none.
    fn select1(&self, j: usize) -> Option<usize>;

    fn count_ones(&self) -> usize {
        self.rank1(self.len())
    }

    /// Bit `i` together with `rank1(i)`.
    fn access_rank1(&self, i: usize) -> (bool, usize) {
        (self.access(i), self.rank1(i))
    }

    fn try_access(&self, i: usize) -> Result<bool> {
        if i >= self.len() {
            return Err(out_of_range(i, self.len()));
        }
        Ok(self.access(i))
    }

    fn try_rank1(&self, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(out_of_range(i, self.len()));
        }
        Ok(self.rank1(i))
    }

    fn try_select1(&self, j: usize) -> Result<usize> {
        self.select1(j).ok_or_else(|| out_of_range(j, self.count_ones()))
    }
}

/// Backend kinds that wavelet trees can be parameterized with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Plain,
    Rrr,
}

impl BackendKind {
    pub fn tag(self) -> u8 {
        match self {
            BackendKind::Plain => 0,
            BackendKind::Rrr => 1,
        }
    }
}

/// A bitvector representation usable as a wavelet-tree level.
pub trait BitBackend: BitRank + Persist + Clone + fmt::Debug + Send + Sync {
    const KIND: BackendKind;

    fn from_bitvector(bits: &BitVector) -> Self;

    /// Position of the `j`-th zero (`j ≥ 1`).
    fn select0(&self, j: usize) -> Option<usize>;
}

/// Smallest position `p` with `rank(p + 1) >= j`, found by binary search.
pub(crate) fn select_by_rank(len: usize, j: usize, rank: impl Fn(usize) -> usize) -> Option<usize> {
    if j == 0 || rank(len) < j {
        return None;
    }
    let (mut lo, mut hi) = (0usize, len);
    // Invariant: rank(lo) < j <= rank(hi).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if rank(mid) < j {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Position of the `r`-th (0-based) set bit of `word`.
#[inline]
pub(crate) fn select_in_word(mut word: u64, r: u32) -> u32 {
    debug_assert!(word.count_ones() > r);
    for _ in 0..r {
        word &= word - 1;
    }
    word.trailing_zeros()
}

/// Uncompressed bit sequence without any index.
#[derive(Clone, PartialEq, Eq)]
pub struct BitVector {
    bits: IntVector,
}

impl BitVector {
    pub fn new(len: usize) -> Self {
        BitVector { bits: IntVector::with_len(len, 1).expect("width 1") }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut bv = Self::new(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                bv.set(i, true);
            }
        }
        bv
    }

    /// Parses a string of `0`/`1` characters, position 0 first.
    pub fn from_str_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bv = Self::new(len);
        for p in ones {
            if p >= len {
                return Err(out_of_range(p, len));
            }
            bv.set(p, true);
        }
        Ok(bv)
    }

    pub fn from_intvector(bits: IntVector) -> Result<Self> {
        if bits.width() != 1 {
            return Err(Error::Format(format!("bitvector frame has width {}", bits.width())));
        }
        Ok(BitVector { bits })
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit as u64);
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len(), "bit {i} out of range for length {}", self.len());
        (self.bits.words()[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len(), "bit {i} out of range for length {}", self.len());
        let w = &mut self.bits.words_mut()[i / 64];
        if bit {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    /// Raw payload words; bits past `len` are zero.
    #[inline]
    pub fn words(&self) -> &[u64] {
        self.bits.words()
    }

    /// `len` bits (≤ 64) starting at `pos`, bit `pos` in the lowest position.
    pub fn get_bits(&self, pos: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && pos + len <= self.len());
        if len == 0 {
            return 0;
        }
        let words = self.words();
        let (w, off) = (pos / 64, pos % 64);
        let mut v = words[w] >> off;
        if off + len > 64 {
            v |= words[w + 1] << (64 - off);
        }
        if len == 64 {
            v
        } else {
            v & ((1u64 << len) - 1)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words().iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words().iter().enumerate().flat_map(|(k, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn as_intvector(&self) -> &IntVector {
        &self.bits
    }

    pub fn heap_bytes(&self) -> usize {
        self.bits.heap_bytes()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: String = self.iter().take(128).map(|b| if b { '1' } else { '0' }).collect();
        write!(f, "BitVector(len={}, {shown})", self.len())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Persist for BitVector {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        self.bits.write_to(w, name)
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        Self::from_intvector(IntVector::read_from(r)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let bv = BitVector::from_str_bits("10110").unwrap();
        assert_eq!(bv.to_string(), "10110");
        assert_eq!(bv.count_ones(), 3);
        assert_eq!(bv.ones().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!(BitVector::from_str_bits("10x").is_err());
    }

    #[test]
    fn get_bits_spans_words() {
        let mut bv = BitVector::new(200);
        for i in (0..200).step_by(3) {
            bv.set(i, true);
        }
        for pos in [0, 1, 60, 63, 64, 100, 136] {
            for len in [0, 1, 5, 33, 64] {
                let naive = (0..len).fold(0u64, |acc, k| acc | ((bv.get(pos + k) as u64) << k));
                assert_eq!(bv.get_bits(pos, len), naive, "pos {pos} len {len}");
            }
        }
    }

    #[test]
    fn select_by_rank_matches_scan() {
        let bits = [true, false, true, true, false];
        let rank = |i: usize| bits[..i].iter().filter(|&&b| b).count();
        assert_eq!(select_by_rank(5, 1, rank), Some(0));
        assert_eq!(select_by_rank(5, 3, rank), Some(3));
        assert_eq!(select_by_rank(5, 4, rank), None);
        assert_eq!(select_by_rank(5, 0, rank), None);
    }

    #[test]
    fn select_in_word_positions() {
        let w = 0b1011_0100u64;
        assert_eq!(select_in_word(w, 0), 2);
        assert_eq!(select_in_word(w, 1), 4);
        assert_eq!(select_in_word(w, 3), 7);
    }
}
