//! RRR bitvector: blocks of `t` bits stored as (class, offset) pairs.
//!
//! A block's class is its popcount; its offset is the block's index among
//! all `t`-bit patterns of that class in colexicographic order, i.e. the
//! combinatorial number `Σ C(p_i, i)` over its set positions
//! `p_1 < p_2 < … < p_c`. Blocks are decoded on the fly by walking the
//! binomial coefficients, so no `2^t` tables are needed.

use std::io::{Read, Write};
use std::sync::OnceLock;

use crate::bitvec::{select_in_word, BackendKind, BitBackend, BitRank, BitVector};
use crate::error::{Error, Result};
use crate::intvec::{bits_for, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCRRRV";

pub const DEFAULT_BLOCK_SIZE: usize = 15;
pub const SUPPORTED_BLOCK_SIZES: [usize; 3] = [15, 31, 63];
const BLOCKS_PER_SUPERBLOCK: usize = 32;

fn binomials() -> &'static [[u64; 64]; 64] {
    static TABLE: OnceLock<Box<[[u64; 64]; 64]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; 64]; 64]);
        for n in 0..64 {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

/// `C(n, k)` for `n < 64`; zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        binomials()[n][k]
    }
}

/// Bits needed to store an offset of the given class: `⌈log2 C(t, c)⌉`.
pub fn offset_width(t: usize, class: usize) -> u8 {
    let count = binomial(t, class);
    if count <= 1 {
        0
    } else {
        (64 - (count - 1).leading_zeros()) as u8
    }
}

fn check_block_size(t: usize) -> Result<()> {
    if SUPPORTED_BLOCK_SIZES.contains(&t) {
        Ok(())
    } else {
        Err(Error::UnsupportedBlockSize(t))
    }
}

/// Class and colex offset of the low `t` bits of `bits`.
pub fn encode_block(bits: u64, t: usize) -> Result<(usize, u64)> {
    check_block_size(t)?;
    if bits >> t != 0 {
        return Err(Error::InvalidArgument(format!("block pattern wider than {t} bits")));
    }
    Ok(encode_unchecked(bits))
}

#[inline]
fn encode_unchecked(mut bits: u64) -> (usize, u64) {
    let mut class = 0;
    let mut offset = 0;
    while bits != 0 {
        let p = bits.trailing_zeros() as usize;
        class += 1;
        offset += binomial(p, class);
        bits &= bits - 1;
    }
    (class, offset)
}

/// Bit pattern of the block with the given class and offset.
pub fn decode_block(class: usize, offset: u64, t: usize) -> Result<u64> {
    check_block_size(t)?;
    if class > t {
        return Err(Error::InvalidArgument(format!("class {class} exceeds block size {t}")));
    }
    if offset >= binomial(t, class) {
        return Err(Error::InvalidArgument(format!(
            "offset {offset} out of range for class {class} (C({t},{class}) = {})",
            binomial(t, class)
        )));
    }
    Ok(decode_unchecked(class, offset, t))
}

#[inline]
fn decode_unchecked(class: usize, mut offset: u64, t: usize) -> u64 {
    if class == t {
        return if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    }
    let mut bits = 0u64;
    let mut p = t;
    for i in (1..=class).rev() {
        // Largest p with C(p, i) <= offset; p >= i - 1 always qualifies.
        p -= 1;
        while binomial(p, i) > offset {
            p -= 1;
        }
        bits |= 1 << p;
        offset -= binomial(p, i);
    }
    bits
}

/// RRR-compressed bitvector with rank and select.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrrVector {
    len: usize,
    block_size: usize,
    ones: usize,
    classes: IntVector,
    offsets: BitVector,
    sb_rank: IntVector,
    sb_ptr: IntVector,
}

impl RrrVector {
    pub fn new(bits: &BitVector, block_size: usize) -> Result<Self> {
        check_block_size(block_size)?;
        let t = block_size;
        let len = bits.len();
        let blocks = len.div_ceil(t);
        let superblocks = blocks / BLOCKS_PER_SUPERBLOCK + 1;
        let mut classes = IntVector::with_len(blocks, bits_for(t as u64)).expect("valid width");
        let mut offsets = BitVector::new(0);
        let mut sb_rank = IntVector::with_len(superblocks, bits_for(len as u64))?;
        let mut ones = 0usize;
        let mut ptr = 0usize;
        let mut pending_ptrs = Vec::with_capacity(superblocks);
        for b in 0..blocks {
            if b % BLOCKS_PER_SUPERBLOCK == 0 {
                sb_rank.set(b / BLOCKS_PER_SUPERBLOCK, ones as u64);
                pending_ptrs.push(ptr as u64);
            }
            let start = b * t;
            let pattern = bits.get_bits(start, t.min(len - start));
            let (class, offset) = encode_unchecked(pattern);
            classes.set(b, class as u64);
            let w = offset_width(t, class) as usize;
            for k in 0..w {
                offsets.push(offset >> k & 1 == 1);
            }
            ptr += w;
            ones += class;
        }
        if blocks % BLOCKS_PER_SUPERBLOCK == 0 {
            sb_rank.set(blocks / BLOCKS_PER_SUPERBLOCK, ones as u64);
            pending_ptrs.push(ptr as u64);
        }
        let sb_ptr = IntVector::from_slice(&pending_ptrs, bits_for(ptr as u64))?;
        Ok(RrrVector { len, block_size: t, ones, classes, offsets, sb_rank, sb_ptr })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn blocks(&self) -> usize {
        self.classes.len()
    }

    /// Class and offset of block `b`, as stored.
    pub fn block(&self, b: usize) -> (usize, u64) {
        let (_, ptr) = self.locate_block(b);
        let class = self.classes.get(b) as usize;
        (class, self.read_offset(ptr, class))
    }

    /// Ones before block `b` and the bit pointer of its offset.
    #[inline]
    fn locate_block(&self, b: usize) -> (usize, usize) {
        let sb = b / BLOCKS_PER_SUPERBLOCK;
        let mut rank = self.sb_rank.get(sb) as usize;
        let mut ptr = self.sb_ptr.get(sb) as usize;
        for k in sb * BLOCKS_PER_SUPERBLOCK..b {
            let c = self.classes.get(k) as usize;
            rank += c;
            ptr += offset_width(self.block_size, c) as usize;
        }
        (rank, ptr)
    }

    #[inline]
    fn read_offset(&self, ptr: usize, class: usize) -> u64 {
        let w = offset_width(self.block_size, class) as usize;
        self.offsets.get_bits(ptr, w)
    }

    #[inline]
    fn decode_at(&self, b: usize, ptr: usize) -> u64 {
        let class = self.classes.get(b) as usize;
        decode_unchecked(class, self.read_offset(ptr, class), self.block_size)
    }

    fn select_generic(&self, j: usize, bit: bool) -> Option<usize> {
        let total = if bit { self.ones } else { self.len - self.ones };
        if j == 0 || j > total {
            return None;
        }
        let t = self.block_size;
        let before_sb = |sb: usize| {
            let ones = self.sb_rank.get(sb) as usize;
            if bit {
                ones
            } else {
                sb * BLOCKS_PER_SUPERBLOCK * t - ones
            }
        };
        let target = j - 1;
        let (mut lo, mut hi) = (0usize, self.sb_rank.len() - 1);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if before_sb(mid) <= target {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut remaining = target - before_sb(lo);
        let mut ptr = self.sb_ptr.get(lo) as usize;
        let mut b = lo * BLOCKS_PER_SUPERBLOCK;
        loop {
            let class = self.classes.get(b) as usize;
            let in_block = if bit { class } else { t.min(self.len - b * t) - class };
            if remaining < in_block {
                let mut pattern = decode_unchecked(class, self.read_offset(ptr, class), t);
                if !bit {
                    pattern = !pattern & ((1u64 << t.min(self.len - b * t)) - 1);
                }
                return Some(b * t + select_in_word(pattern, remaining as u32) as usize);
            }
            remaining -= in_block;
            ptr += offset_width(t, class) as usize;
            b += 1;
        }
    }
}

impl BitRank for RrrVector {
    fn len(&self) -> usize {
        self.len
    }

    fn access(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let b = i / self.block_size;
        let (_, ptr) = self.locate_block(b);
        self.decode_at(b, ptr) >> (i % self.block_size) & 1 == 1
    }

    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {i} beyond length {}", self.len);
        if i == self.len {
            return self.ones;
        }
        let b = i / self.block_size;
        let (rank, ptr) = self.locate_block(b);
        let off = i % self.block_size;
        if off == 0 {
            return rank;
        }
        rank + (self.decode_at(b, ptr) & ((1u64 << off) - 1)).count_ones() as usize
    }

    fn access_rank1(&self, i: usize) -> (bool, usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let b = i / self.block_size;
        let (rank, ptr) = self.locate_block(b);
        let off = i % self.block_size;
        let pattern = self.decode_at(b, ptr);
        (pattern >> off & 1 == 1, rank + (pattern & ((1u64 << off) - 1)).count_ones() as usize)
    }

    fn select1(&self, j: usize) -> Option<usize> {
        self.select_generic(j, true)
    }

    fn count_ones(&self) -> usize {
        self.ones
    }
}

impl BitBackend for RrrVector {
    const KIND: BackendKind = BackendKind::Rrr;

    fn from_bitvector(bits: &BitVector) -> Self {
        RrrVector::new(bits, DEFAULT_BLOCK_SIZE).expect("default block size is supported")
    }

    fn select0(&self, j: usize) -> Option<usize> {
        self.select_generic(j, false)
    }
}

impl Persist for RrrVector {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        persist::write_u8(w, self.block_size as u8)?;
        persist::write_u64(w, self.len as u64)?;
        persist::write_u64(w, self.ones as u64)?;
        node.child(self.classes.write_to(w, "classes")?);
        node.child(self.offsets.write_to(w, "offsets")?);
        node.child(self.sb_rank.write_to(w, "superblock_rank")?);
        node.child(self.sb_ptr.write_to(w, "superblock_ptr")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let block_size = persist::read_u8(r)? as usize;
        check_block_size(block_size)?;
        let len = persist::read_usize(r)?;
        let ones = persist::read_usize(r)?;
        let classes = IntVector::read_from(r)?;
        let offsets = BitVector::read_from(r)?;
        let sb_rank = IntVector::read_from(r)?;
        let sb_ptr = IntVector::read_from(r)?;
        if classes.len() != len.div_ceil(block_size) || sb_rank.len() != sb_ptr.len() {
            return Err(Error::Format("inconsistent RRR vector".into()));
        }
        Ok(RrrVector { len, block_size, ones, classes, offsets, sb_rank, sb_ptr })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitvec::PlainBitVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extreme_classes() {
        assert_eq!(encode_block(0, 15).unwrap(), (0, 0));
        assert_eq!(encode_block((1 << 15) - 1, 15).unwrap(), (15, 0));
        assert_eq!(decode_block(0, 0, 15).unwrap(), 0);
        assert_eq!(decode_block(15, 0, 15).unwrap(), (1 << 15) - 1);
    }

    #[test]
    fn single_one_first_offset_is_position_zero() {
        // Colex order over single-one patterns is by position.
        for p in 0..15 {
            assert_eq!(decode_block(1, p as u64, 15).unwrap(), 1 << p);
        }
    }

    #[test]
    fn decode_errors() {
        assert!(decode_block(1, 15, 15).is_err());
        assert!(decode_block(0, 1, 15).is_err());
        assert!(decode_block(16, 0, 15).is_err());
        assert!(matches!(decode_block(1, 0, 16), Err(Error::UnsupportedBlockSize(16))));
        assert!(RrrVector::new(&BitVector::new(10), 7).is_err());
    }

    #[test]
    fn exhaustive_t15_bijection() {
        // Enumerate patterns of each class in colex order independently.
        let mut by_class: Vec<Vec<u64>> = vec![Vec::new(); 16];
        for pattern in 0u64..(1 << 15) {
            by_class[pattern.count_ones() as usize].push(pattern);
        }
        for (class, patterns) in by_class.iter_mut().enumerate() {
            // Colex: compare from the highest bit down, i.e. plain numeric order.
            patterns.sort_unstable();
            assert_eq!(patterns.len() as u64, binomial(15, class));
            for (offset, &p) in patterns.iter().enumerate() {
                assert_eq!(decode_block(class, offset as u64, 15).unwrap(), p);
                assert_eq!(encode_block(p, 15).unwrap(), (class, offset as u64));
            }
        }
    }

    #[test]
    fn offset_widths_are_ceil_log_binomial() {
        for t in SUPPORTED_BLOCK_SIZES {
            for c in 0..=t {
                let count = binomial(t, c) as f64;
                let expect = count.log2().ceil() as u8;
                assert_eq!(offset_width(t, c), expect, "t={t} c={c}");
            }
        }
    }

    #[test]
    fn wide_blocks_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for t in [31usize, 63] {
            for _ in 0..2000 {
                let p = rng.random::<u64>() & ((1u64 << t) - 1);
                let (c, o) = encode_block(p, t).unwrap();
                assert_eq!(decode_block(c, o, t).unwrap(), p);
            }
        }
    }

    #[test]
    fn matches_plain_vector_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.05)).collect();
        let bv = BitVector::from_bools(&bits);
        let plain = PlainBitVector::with_select0(bv.clone());
        for t in SUPPORTED_BLOCK_SIZES {
            let rrr = RrrVector::new(&bv, t).unwrap();
            assert_eq!(rrr.count_ones(), plain.count_ones());
            for _ in 0..10_000 {
                let i = rng.random_range(0..n);
                assert_eq!(rrr.access(i), plain.access(i));
                assert_eq!(rrr.rank1(i), plain.rank1(i));
                assert_eq!(rrr.access_rank1(i), (plain.access(i), plain.rank1(i)));
                let j = rng.random_range(1..=plain.count_ones());
                assert_eq!(rrr.select1(j), plain.select1(j));
                let z = rng.random_range(1..=n - plain.count_ones());
                assert_eq!(rrr.select0(z), plain.select0(z));
            }
            assert_eq!(rrr.rank1(n), plain.rank1(n));
        }
    }

    #[test]
    fn sparse_input_compresses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.1)).collect();
        let rrr = RrrVector::new(&BitVector::from_bools(&bits), 15).unwrap();
        let size_bits = rrr.size_tree("rrr").unwrap().size * 8;
        assert!(size_bits <= n as u64, "{size_bits} bits for n = {n}");
    }

    #[test]
    fn stored_blocks_decode_to_source() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bits: Vec<bool> = (0..1000).map(|_| rng.random_bool(0.4)).collect();
        let bv = BitVector::from_bools(&bits);
        let rrr = RrrVector::new(&bv, 15).unwrap();
        for b in 0..rrr.blocks() {
            let (c, o) = rrr.block(b);
            let width = 15.min(1000 - b * 15);
            assert_eq!(decode_block(c, o, 15).unwrap(), bv.get_bits(b * 15, width));
        }
        let back = RrrVector::from_bytes(&rrr.to_bytes().unwrap()).unwrap();
        assert_eq!(back, rrr);
    }
}
