use std::io::{Read, Write};

use super::BitVector;
use crate::error::{Error, Result};
use crate::intvec::IntVector;
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCRANK";

pub(crate) const SUPERBLOCK_BITS: usize = 2048;
const SUPERBLOCK_WORDS: usize = SUPERBLOCK_BITS / 64;
const SUB_WORDS: usize = 6;
const REL_BITS: usize = 12;

/// Two-word-per-superblock rank directory (6.25% overhead).
///
/// For every 2048-bit superblock the directory stores the absolute number
/// of ones before it, then one word packing five 12-bit counts relative to
/// the superblock start, taken at word offsets 6, 12, 18, 24 and 30. A
/// query reads both words and popcounts at most five more payload words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSupport {
    dir: IntVector,
}

impl RankSupport {
    pub fn new(bv: &BitVector) -> Self {
        let words = bv.words();
        let superblocks = bv.len() / SUPERBLOCK_BITS + 1;
        let mut dir = IntVector::with_len(2 * superblocks, 64).expect("width 64");
        let mut total = 0u64;
        for sb in 0..superblocks {
            dir.set(2 * sb, total);
            let base = sb * SUPERBLOCK_WORDS;
            let mut rel = 0u64;
            let mut packed = 0u64;
            for k in 0..SUPERBLOCK_WORDS {
                if k > 0 && k % SUB_WORDS == 0 {
                    packed |= rel << (REL_BITS * (k / SUB_WORDS - 1));
                }
                if let Some(w) = words.get(base + k) {
                    rel += w.count_ones() as u64;
                }
            }
            dir.set(2 * sb + 1, packed);
            total += rel;
        }
        RankSupport { dir }
    }

    /// Ones in `[0, i)`; `i` must not exceed the vector length.
    #[inline]
    pub fn rank1(&self, bv: &BitVector, i: usize) -> usize {
        debug_assert!(i <= bv.len());
        let sb = i / SUPERBLOCK_BITS;
        let word = i / 64;
        let k = word - sb * SUPERBLOCK_WORDS;
        let sub = k / SUB_WORDS;
        let mut r = self.dir.get(2 * sb) as usize;
        if sub > 0 {
            r += ((self.dir.get(2 * sb + 1) >> (REL_BITS * (sub - 1))) & 0xFFF) as usize;
        }
        let words = bv.words();
        for w in &words[sb * SUPERBLOCK_WORDS + sub * SUB_WORDS..word] {
            r += w.count_ones() as usize;
        }
        let off = i % 64;
        if off > 0 {
            r += (words[word] & ((1u64 << off) - 1)).count_ones() as usize;
        }
        r
    }

    pub(crate) fn superblocks(&self) -> usize {
        self.dir.len() / 2
    }

    /// Ones before superblock `sb`.
    #[inline]
    pub(crate) fn superblock_rank(&self, sb: usize) -> usize {
        self.dir.get(2 * sb) as usize
    }

    /// Ones before the sub-block `sub` (0..=5) of superblock `sb`, relative
    /// to the superblock start.
    #[inline]
    pub(crate) fn sub_rank(&self, sb: usize, sub: usize) -> usize {
        if sub == 0 {
            0
        } else {
            ((self.dir.get(2 * sb + 1) >> (REL_BITS * (sub - 1))) & 0xFFF) as usize
        }
    }

    pub fn heap_bytes(&self) -> usize {
        self.dir.heap_bytes()
    }
}

pub(crate) const SUBS_PER_SUPERBLOCK: usize = SUPERBLOCK_WORDS.div_ceil(SUB_WORDS);
pub(crate) const WORDS_PER_SUB: usize = SUB_WORDS;
pub(crate) const WORDS_PER_SUPERBLOCK: usize = SUPERBLOCK_WORDS;

impl Persist for RankSupport {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        node.child(self.dir.write_to(w, "directory")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let dir = IntVector::read_from(r)?;
        if dir.width() != 64 || dir.len() % 2 != 0 {
            return Err(Error::Format("malformed rank directory".into()));
        }
        Ok(RankSupport { dir })
    }
}
