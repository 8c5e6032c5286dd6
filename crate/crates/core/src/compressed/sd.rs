//! Elias-Fano encoded sparse bitvector.

use std::io::{Read, Write};

use crate::bitvec::{BitBackend, BitRank, BitVector, PlainBitVector};
use crate::error::{Error, Result};
use crate::intvec::IntVector;
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCSDVC";

/// Sparse bitvector over a universe of `len` positions with `m` ones.
///
/// Each one-position is split into `low_width` low bits, stored verbatim,
/// and a high part stored in unary: the `k`-th one sets bit
/// `(p_k >> low_width) + k` of the high bitvector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdVector {
    len: usize,
    ones: usize,
    low_width: u8,
    low: IntVector,
    high: PlainBitVector,
}

/// `max(1, ⌊log2(n / m)⌋)`, with width 1 when `m = 0` or `m > n / 2`.
pub fn low_width_for(n: usize, m: usize) -> u8 {
    if m == 0 {
        return 1;
    }
    let ratio = n / m;
    if ratio < 2 {
        1
    } else {
        (63 - (ratio as u64).leading_zeros()) as u8
    }
}

impl SdVector {
    pub fn new(positions: &[u64], len: usize) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedPositions);
        }
        if positions.last().is_some_and(|&p| p >= len as u64) {
            return Err(Error::UnsortedPositions);
        }
        Ok(Self::from_sorted_iter(len, positions.len(), positions.iter().copied()))
    }

    /// Builds from an iterator of `ones` strictly increasing positions.
    /// Ordering is checked in debug builds only.
    pub fn from_sorted_iter(len: usize, ones: usize, positions: impl IntoIterator<Item = u64>) -> Self {
        let w = low_width_for(len, ones);
        let high_len = if len == 0 { ones } else { ones + ((len - 1) >> w) + 1 };
        let mut high = BitVector::new(high_len);
        let mut low = IntVector::with_len(ones, w).expect("valid width");
        let mut count = 0usize;
        let mut prev: Option<u64> = None;
        for p in positions {
            debug_assert!(prev.is_none_or(|q| q < p) && (p as usize) < len);
            prev = Some(p);
            low.set(count, p & ((1u64 << w) - 1));
            high.set((p >> w) as usize + count, true);
            count += 1;
        }
        assert_eq!(count, ones, "iterator yielded {count} positions, expected {ones}");
        SdVector { len, ones, low_width: w, low, high: PlainBitVector::with_select0(high) }
    }

    pub fn from_bitvector(bits: &BitVector) -> Self {
        let ones = bits.count_ones();
        Self::from_sorted_iter(bits.len(), ones, bits.ones().map(|p| p as u64))
    }

    pub fn low_width(&self) -> u8 {
        self.low_width
    }

    pub fn low(&self) -> &IntVector {
        &self.low
    }

    pub fn high(&self) -> &BitVector {
        self.high.bits()
    }

    /// The `j`-th smallest one-position, 1-indexed (alias of `select1`).
    #[inline]
    pub fn get(&self, j: usize) -> u64 {
        self.select1(j).expect("ordinal in range") as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.high
            .bits()
            .ones()
            .enumerate()
            .map(move |(k, pos)| (((pos - k) as u64) << self.low_width) | self.low.get(k))
    }
}

impl BitRank for SdVector {
    fn len(&self) -> usize {
        self.len
    }

    fn access(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.rank1(i + 1) > self.rank1(i)
    }

    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {i} beyond length {}", self.len);
        if i == self.len {
            return self.ones;
        }
        let w = self.low_width;
        let hi = i >> w;
        let lo = (i as u64) & ((1u64 << w) - 1);
        // Start of bucket `hi` in the high bits.
        let mut pos = if hi == 0 { 0 } else { self.high.select0(hi).expect("bucket exists") + 1 };
        let mut k = pos - hi;
        let high = self.high.bits();
        while pos < high.len() && high.get(pos) && self.low.get(k) < lo {
            pos += 1;
            k += 1;
        }
        k
    }

    fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.ones {
            return None;
        }
        let pos = self.high.select1(j)?;
        let hi = (pos - (j - 1)) as u64;
        Some(((hi << self.low_width) | self.low.get(j - 1)) as usize)
    }

    fn count_ones(&self) -> usize {
        self.ones
    }
}

impl Persist for SdVector {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        persist::write_u64(w, self.len as u64)?;
        persist::write_u64(w, self.ones as u64)?;
        node.child(self.low.write_to(w, "low")?);
        node.child(self.high.write_to(w, "high")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let len = persist::read_usize(r)?;
        let ones = persist::read_usize(r)?;
        let low = IntVector::read_from(r)?;
        let high = PlainBitVector::read_from(r)?;
        if low.len() != ones || high.count_ones() != ones {
            return Err(Error::Format("inconsistent Elias-Fano vector".into()));
        }
        Ok(SdVector { len, ones, low_width: low.width(), low, high })
    }
}
