//! Balanced wavelet tree over an integer alphabet, stored level-wise.
//!
//! Symbols are coded MSB-first with `⌈log2 σ⌉` bits. Level `ℓ` is a single
//! bitvector holding the nodes of depth `ℓ` left to right; every node is the
//! stable subsequence of symbols sharing its `ℓ`-bit prefix.

use std::io::{Read, Write};

use crate::bitvec::{BitBackend, BitVector};
use crate::error::{out_of_range, Error, Result};
use crate::intvec::{ceil_log2, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

use super::{check_symbols, Shape, WT_MAGIC};

/// A node of a balanced tree together with a node-local interval.
///
/// `start..start + len` is the node's extent in its level bitvector and
/// `lo..hi` a sub-interval relative to `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WtNode {
    /// Heap numbering: root 1, children `2v` and `2v + 1`.
    pub id: u64,
    pub depth: u8,
    pub sym_lo: u64,
    /// Inclusive upper symbol, clipped to `σ - 1`.
    pub sym_hi: u64,
    pub start: usize,
    pub len: usize,
    pub lo: usize,
    pub hi: usize,
}

impl WtNode {
    pub fn size(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    /// Inclusive node-local interval, `None` when empty.
    pub fn interval(&self) -> Option<(usize, usize)> {
        (self.hi > self.lo).then(|| (self.lo, self.hi - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedWt<B> {
    len: usize,
    sigma: u64,
    height: u8,
    levels: Vec<B>,
}

impl<B: BitBackend> BalancedWt<B> {
    pub fn new(seq: &IntVector, sigma: u64) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::InvalidArgument("alphabet size must be positive".into()));
        }
        check_symbols(seq.iter(), sigma)?;
        let len = seq.len();
        let height = if sigma == 1 { 0 } else { ceil_log2(sigma) };
        let mut levels = Vec::with_capacity(height as usize);
        if height == 0 {
            return Ok(BalancedWt { len, sigma, height, levels });
        }
        let mut cur = seq.clone();
        let mut next = IntVector::with_len(len, seq.width())?;
        for level in 0..height {
            let shift = height - 1 - level;
            let mut bits = BitVector::new(len);
            for (i, v) in cur.iter().enumerate() {
                if v >> shift & 1 == 1 {
                    bits.set(i, true);
                }
            }
            levels.push(B::from_bitvector(&bits));
            drop(bits);
            if level + 1 == height {
                break;
            }
            // Stable partition by the (level + 1)-bit prefix: within each
            // node, zeros keep their order and precede the ones.
            let groups = 1usize << (level + 1);
            let mut counts = vec![0usize; groups + 1];
            for v in cur.iter() {
                counts[(v >> shift) as usize + 1] += 1;
            }
            for g in 0..groups {
                counts[g + 1] += counts[g];
            }
            for v in cur.iter() {
                let g = (v >> shift) as usize;
                next.set(counts[g], v);
                counts[g] += 1;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(BalancedWt { len, sigma, height, levels })
    }

    pub fn from_slice(seq: &[u64], sigma: u64) -> Result<Self> {
        let width = crate::intvec::bits_for(sigma.saturating_sub(1));
        let iv = IntVector::from_slice(seq, width).map_err(|_| {
            let bad = seq.iter().copied().find(|&s| s >= sigma).unwrap_or(sigma);
            Error::SymbolRange { symbol: bad, sigma }
        })?;
        Self::new(&iv, sigma)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn height(&self) -> u8 {
        self.height
    }

    pub fn level(&self, l: usize) -> &B {
        &self.levels[l]
    }

    pub fn access(&self, i: usize) -> Result<u64> {
        if i >= self.len {
            return Err(out_of_range(i, self.len));
        }
        let (mut start, mut end, mut p) = (0usize, self.len, i);
        let mut sym = 0u64;
        for bv in &self.levels {
            let r0_start = bv.rank0(start);
            let zeros = bv.rank0(end) - r0_start;
            let (bit, r1_p) = bv.access_rank1(p);
            if bit {
                let r1_start = start - r0_start;
                p = start + zeros + (r1_p - r1_start);
                start += zeros;
                sym = sym << 1 | 1;
            } else {
                p = start + (p - r1_p) - r0_start;
                end = start + zeros;
                sym <<= 1;
            }
        }
        Ok(sym)
    }

    /// Occurrences of `s` in `[0, i)`.
    pub fn rank(&self, i: usize, s: u64) -> Result<usize> {
        if i > self.len {
            return Err(out_of_range(i, self.len));
        }
        if s >= self.sigma {
            return Err(Error::SymbolRange { symbol: s, sigma: self.sigma });
        }
        let (mut start, mut end, mut p) = (0usize, self.len, i);
        for (level, bv) in self.levels.iter().enumerate() {
            let shift = self.height as usize - 1 - level;
            let r0_start = bv.rank0(start);
            let zeros = bv.rank0(end) - r0_start;
            let r0_p = bv.rank0(p);
            if s >> shift & 1 == 1 {
                let r1_start = start - r0_start;
                p = start + zeros + (p - r0_p - r1_start);
                start += zeros;
            } else {
                p = start + (r0_p - r0_start);
                end = start + zeros;
            }
        }
        Ok(p - start)
    }

    /// Position of the `j`-th occurrence of `s`, 1-indexed.
    pub fn select(&self, j: usize, s: u64) -> Result<usize> {
        if s >= self.sigma {
            return Err(Error::SymbolRange { symbol: s, sigma: self.sigma });
        }
        let total = self.rank(self.len, s)?;
        if j == 0 || j > total {
            return Err(out_of_range(j, total));
        }
        if self.height == 0 {
            return Ok(j - 1);
        }
        // Node starts along the root-to-leaf path.
        let mut starts = Vec::with_capacity(self.height as usize + 1);
        let (mut start, mut end) = (0usize, self.len);
        for (level, bv) in self.levels.iter().enumerate() {
            starts.push(start);
            let shift = self.height as usize - 1 - level;
            let r0_start = bv.rank0(start);
            let zeros = bv.rank0(end) - r0_start;
            if s >> shift & 1 == 1 {
                start += zeros;
            } else {
                end = start + zeros;
            }
        }
        let mut pos = j - 1;
        for level in (0..self.height as usize).rev() {
            let bv = &self.levels[level];
            let shift = self.height as usize - 1 - level;
            let node_start = starts[level];
            let global = if s >> shift & 1 == 1 {
                bv.select1(bv.rank1(node_start) + pos + 1)
            } else {
                bv.select0(bv.rank0(node_start) + pos + 1)
            }
            .expect("occurrence exists at every level");
            pos = global - node_start;
        }
        Ok(pos)
    }

    pub fn root(&self, lo: usize, hi: usize) -> Result<WtNode> {
        if lo > hi || hi > self.len {
            return Err(Error::InvalidArgument(format!("bad interval {lo}..{hi}")));
        }
        Ok(WtNode {
            id: 1,
            depth: 0,
            sym_lo: 0,
            sym_hi: self.sigma - 1,
            start: 0,
            len: self.len,
            lo,
            hi,
        })
    }

    pub fn is_leaf(&self, node: &WtNode) -> bool {
        node.depth == self.height
    }

    /// Symbol of a leaf node.
    pub fn leaf_symbol(&self, node: &WtNode) -> u64 {
        debug_assert!(self.is_leaf(node));
        node.sym_lo
    }

    /// Splits an internal node's interval between its two children.
    pub fn expand(&self, node: &WtNode) -> Result<(WtNode, WtNode)> {
        if self.is_leaf(node) {
            return Err(Error::InvalidArgument("cannot expand a leaf".into()));
        }
        let bv = &self.levels[node.depth as usize];
        let r0_start = bv.rank0(node.start);
        let zeros = bv.rank0(node.start + node.len) - r0_start;
        let z_lo = bv.rank0(node.start + node.lo) - r0_start;
        let z_hi = bv.rank0(node.start + node.hi) - r0_start;
        let child_bits = self.height - node.depth - 1;
        let prefix = node.id - (1u64 << node.depth);
        let left_prefix = prefix << 1;
        let clip = |p: u64| {
            let lo = p << child_bits;
            let hi = ((p + 1) << child_bits) - 1;
            (lo, hi.min(self.sigma - 1))
        };
        let (l_lo, l_hi) = clip(left_prefix);
        let (r_lo, r_hi) = clip(left_prefix + 1);
        let left = WtNode {
            id: node.id << 1,
            depth: node.depth + 1,
            sym_lo: l_lo,
            sym_hi: l_hi,
            start: node.start,
            len: zeros,
            lo: z_lo,
            hi: z_hi,
        };
        let right = WtNode {
            id: (node.id << 1) | 1,
            depth: node.depth + 1,
            sym_lo: r_lo,
            sym_hi: r_hi,
            start: node.start + zeros,
            len: node.len - zeros,
            lo: node.lo - z_lo,
            hi: node.hi - z_hi,
        };
        Ok((left, right))
    }

    /// Stored bits over all levels.
    pub fn total_bits(&self) -> usize {
        self.levels.iter().map(|b| b.len()).sum()
    }
}

impl<B: BitBackend> Persist for BalancedWt<B> {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &WT_MAGIC)?;
        persist::write_u8(w, Shape::Balanced.tag())?;
        persist::write_u64(w, self.sigma)?;
        persist::write_u8(w, B::KIND.tag())?;
        persist::write_u64(w, self.len as u64)?;
        for (l, bv) in self.levels.iter().enumerate() {
            node.child(bv.write_to(w, &format!("level_{l}"))?);
        }
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &WT_MAGIC)?;
        if persist::read_u8(r)? != Shape::Balanced.tag() {
            return Err(Error::Format("expected a balanced wavelet tree".into()));
        }
        let sigma = persist::read_u64(r)?;
        if persist::read_u8(r)? != B::KIND.tag() {
            return Err(Error::Format("wavelet tree backend mismatch".into()));
        }
        let len = persist::read_usize(r)?;
        if sigma == 0 {
            return Err(Error::Format("zero alphabet".into()));
        }
        let height = if sigma == 1 { 0 } else { ceil_log2(sigma) };
        let levels = (0..height).map(|_| B::read_from(r)).collect::<Result<Vec<_>>>()?;
        if levels.iter().any(|b| b.len() != len) {
            return Err(Error::Format("level length mismatch".into()));
        }
        Ok(BalancedWt { len, sigma, height, levels })
    }
}
