use std::io::{Read, Write};

use super::rank::{
    RankSupport, SUBS_PER_SUPERBLOCK, SUPERBLOCK_BITS, WORDS_PER_SUB, WORDS_PER_SUPERBLOCK,
};
use super::{select_in_word, BitVector};
use crate::error::{Error, Result};
use crate::intvec::{bits_for, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCSELS";

pub const SELECT_SAMPLE_RATE: usize = 4096;

/// Select over ones (or zeros) of a bitvector with a [`RankSupport`].
///
/// Stores the position of every 4096th target bit. A query jumps to the
/// sampled superblock range, binary-searches the rank directory, then
/// scans at most one sub-block of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectSupport {
    bit: bool,
    count: usize,
    samples: IntVector,
}

impl SelectSupport {
    pub fn new(bv: &BitVector, bit: bool) -> Self {
        let mut samples = IntVector::new(bits_for(bv.len() as u64)).expect("valid width");
        let mut seen = 0usize;
        for (k, &raw) in bv.words().iter().enumerate() {
            let mut w = if bit { raw } else { !raw };
            if k * 64 + 64 > bv.len() {
                let valid = bv.len() - k * 64;
                if valid < 64 {
                    w &= (1u64 << valid) - 1;
                }
            }
            let c = w.count_ones() as usize;
            // Sample ordinals are seen+1 .. seen+c; record those ≡ 1 mod rate.
            let mut next = (seen / SELECT_SAMPLE_RATE) * SELECT_SAMPLE_RATE;
            if next < seen {
                next += SELECT_SAMPLE_RATE;
            }
            while next < seen + c {
                let pos = k * 64 + select_in_word(w, (next - seen) as u32) as usize;
                samples.push(pos as u64);
                next += SELECT_SAMPLE_RATE;
            }
            seen += c;
        }
        samples.shrink_to_fit();
        SelectSupport { bit, count: seen, samples }
    }

    pub fn bit(&self) -> bool {
        self.bit
    }

    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    fn rank_at_superblock(&self, rank: &RankSupport, sb: usize) -> usize {
        let ones = rank.superblock_rank(sb);
        if self.bit {
            ones
        } else {
            sb * SUPERBLOCK_BITS - ones
        }
    }

    /// Position of the `j`-th target bit, 1-indexed.
    pub fn select(&self, bv: &BitVector, rank: &RankSupport, j: usize) -> Option<usize> {
        if j == 0 || j > self.count {
            return None;
        }
        let target = j - 1;
        let s = target / SELECT_SAMPLE_RATE;
        let lo_pos = self.samples.get(s) as usize;
        if target % SELECT_SAMPLE_RATE == 0 {
            return Some(lo_pos);
        }
        let hi_pos = if s + 1 < self.samples.len() { self.samples.get(s + 1) as usize } else { bv.len() };
        // Last superblock whose preceding count is <= target.
        let (mut lo, mut hi) = (lo_pos / SUPERBLOCK_BITS, hi_pos / SUPERBLOCK_BITS);
        hi = hi.min(rank.superblocks() - 1);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.rank_at_superblock(rank, mid) <= target {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let mut remaining = target - self.rank_at_superblock(rank, sb);
        let mut sub = 0;
        for cand in 1..SUBS_PER_SUPERBLOCK {
            let ones = rank.sub_rank(sb, cand);
            let before = if self.bit { ones } else { cand * WORDS_PER_SUB * 64 - ones };
            if before <= remaining {
                sub = cand;
            } else {
                break;
            }
        }
        let ones = rank.sub_rank(sb, sub);
        remaining -= if self.bit { ones } else { sub * WORDS_PER_SUB * 64 - ones };
        let words = bv.words();
        let mut k = sb * WORDS_PER_SUPERBLOCK + sub * WORDS_PER_SUB;
        loop {
            let w = if self.bit { words[k] } else { !words[k] };
            let c = w.count_ones() as usize;
            if remaining < c {
                return Some(k * 64 + select_in_word(w, remaining as u32) as usize);
            }
            remaining -= c;
            k += 1;
        }
    }

    pub fn heap_bytes(&self) -> usize {
        self.samples.heap_bytes()
    }
}

impl Persist for SelectSupport {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        persist::write_u8(w, self.bit as u8)?;
        persist::write_u64(w, self.count as u64)?;
        node.child(self.samples.write_to(w, "samples")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let bit = match persist::read_u8(r)? {
            0 => false,
            1 => true,
            b => return Err(Error::Format(format!("bad select bit {b}"))),
        };
        let count = persist::read_usize(r)?;
        let samples = IntVector::read_from(r)?;
        if samples.len() != count.div_ceil(SELECT_SAMPLE_RATE) {
            return Err(Error::Format("select sample count mismatch".into()));
        }
        Ok(SelectSupport { bit, count, samples })
    }
}
