//! Huffman-shaped wavelet tree with canonical codes.
//!
//! Internal nodes are numbered in preorder and their bitvectors are
//! concatenated in that order into one backend bitvector.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{Read, Write};

use crate::bitvec::{BitBackend, BitVector};
use crate::error::{out_of_range, Error, Result};
use crate::intvec::{bits_for, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

use super::{check_symbols, Shape, WT_MAGIC};

/// Child reference: `(symbol << 1) | 1` for a leaf, `node << 1` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Child {
    Node(usize),
    Leaf(u64),
}

impl Child {
    fn encode(self) -> u64 {
        match self {
            Child::Node(k) => (k as u64) << 1,
            Child::Leaf(s) => (s << 1) | 1,
        }
    }

    fn decode(v: u64) -> Self {
        if v & 1 == 1 {
            Child::Leaf(v >> 1)
        } else {
            Child::Node((v >> 1) as usize)
        }
    }
}

/// Code lengths by Huffman merging. Ties are broken by the smallest symbol
/// in each subtree so the result is deterministic.
pub fn code_lengths(freqs: &[u64]) -> Vec<u8> {
    let mut lens = vec![0u8; freqs.len()];
    let present: Vec<usize> = (0..freqs.len()).filter(|&s| freqs[s] > 0).collect();
    if present.len() < 2 {
        return lens;
    }
    // Subtrees as (members), merged by (weight, min symbol).
    let mut members: Vec<Vec<usize>> = present.iter().map(|&s| vec![s]).collect();
    let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> =
        present.iter().enumerate().map(|(k, &s)| Reverse((freqs[s], s, k))).collect();
    while heap.len() > 1 {
        let Reverse((wa, ma, a)) = heap.pop().unwrap();
        let Reverse((wb, mb, b)) = heap.pop().unwrap();
        let mut merged = std::mem::take(&mut members[a]);
        merged.append(&mut members[b]);
        for &s in &merged {
            lens[s] += 1;
        }
        members[a] = merged;
        heap.push(Reverse((wa + wb, ma.min(mb), a)));
    }
    lens
}

/// Canonical codes from code lengths: symbols sorted by `(length, symbol)`
/// receive consecutive codes. Absent symbols (length 0) get code 0.
pub fn canonical_codes(lens: &[u8]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..lens.len()).filter(|&s| lens[s] > 0).collect();
    order.sort_by_key(|&s| (lens[s], s));
    let mut codes = vec![0u64; lens.len()];
    let mut code = 0u64;
    let mut prev = order.first().map_or(0, |&s| lens[s]);
    for &s in &order {
        code <<= lens[s] - prev;
        prev = lens[s];
        codes[s] = code;
        code += 1;
    }
    codes
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanWt<B> {
    len: usize,
    sigma: u64,
    bits: B,
    /// Per internal node: offset of its bitvector in `bits`.
    offsets: IntVector,
    /// Per internal node: children as encoded [`Child`] values.
    left: IntVector,
    right: IntVector,
    /// Per internal node: `(parent << 1) | side`; the root stores 0.
    parent: IntVector,
    /// Per symbol: code length (0 when absent) and code, MSB at the root.
    code_len: IntVector,
    code: IntVector,
    /// Per symbol: internal node holding the leaf, with the side bit.
    leaf_parent: IntVector,
    /// The symbol of a sequence with exactly one distinct symbol.
    lone: Option<u64>,
}

impl<B: BitBackend> HuffmanWt<B> {
    pub fn new(seq: &IntVector, sigma: u64) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::InvalidArgument("alphabet size must be positive".into()));
        }
        check_symbols(seq.iter(), sigma)?;
        let len = seq.len();
        let mut freqs = vec![0u64; sigma as usize];
        for s in seq.iter() {
            freqs[s as usize] += 1;
        }
        let lens = code_lengths(&freqs);
        let codes = canonical_codes(&lens);

        // Build the code trie. Node 0 is the root when it is internal.
        let mut left: Vec<Option<Child>> = Vec::new();
        let mut right: Vec<Option<Child>> = Vec::new();
        let mut lone: Option<u64> = None;
        for s in 0..sigma as usize {
            if freqs[s] == 0 {
                continue;
            }
            if lens[s] == 0 {
                lone = Some(s as u64);
                continue;
            }
            if left.is_empty() {
                left.push(None);
                right.push(None);
            }
            let mut node = 0usize;
            for d in (0..lens[s]).rev() {
                let bit = codes[s] >> d & 1 == 1;
                let slot = if bit { &mut right[node] } else { &mut left[node] };
                if d == 0 {
                    *slot = Some(Child::Leaf(s as u64));
                } else {
                    node = match *slot {
                        Some(Child::Node(k)) => k,
                        _ => {
                            let k = left.len();
                            if bit {
                                right[node] = Some(Child::Node(k));
                            } else {
                                left[node] = Some(Child::Node(k));
                            }
                            left.push(None);
                            right.push(None);
                            k
                        }
                    };
                }
            }
        }
        let internal = left.len();

        // Preorder renumbering.
        let mut pre = vec![0usize; internal];
        let mut order = Vec::with_capacity(internal);
        let mut stack = Vec::new();
        if internal > 0 {
            stack.push(0usize);
        }
        while let Some(k) = stack.pop() {
            pre[k] = order.len();
            order.push(k);
            if let Some(Child::Node(r)) = right[k] {
                stack.push(r);
            }
            if let Some(Child::Node(l)) = left[k] {
                stack.push(l);
            }
        }
        let remap = |c: Option<Child>| match c.expect("full binary trie") {
            Child::Node(k) => Child::Node(pre[k]),
            leaf => leaf,
        };

        // Node sizes: sum of leaf frequencies below, gathered bottom-up.
        let mut size = vec![0u64; internal];
        for &k in order.iter().rev() {
            let weight = |c: Child| match c {
                Child::Leaf(s) => freqs[s as usize],
                Child::Node(j) => size[j],
            };
            size[pre[k]] = weight(remap(left[k])) + weight(remap(right[k]));
        }
        let total: u64 = size.iter().sum();
        let w_off = bits_for(total);
        let w_child = bits_for(((sigma.max(internal as u64)) << 1) | 1);
        let mut offsets = IntVector::with_len(internal, w_off)?;
        let mut lv = IntVector::with_len(internal, w_child)?;
        let mut rv = IntVector::with_len(internal, w_child)?;
        let mut parent = IntVector::with_len(internal, bits_for((internal as u64) << 1 | 1))?;
        let mut leaf_parent = IntVector::with_len(sigma as usize, bits_for((internal as u64) << 1 | 1))?;
        let mut acc = 0u64;
        for (p, &k) in order.iter().enumerate() {
            offsets.set(p, acc);
            acc += size[p];
            for (side, c) in [(0u64, remap(left[k])), (1u64, remap(right[k]))] {
                if side == 0 {
                    lv.set(p, c.encode());
                } else {
                    rv.set(p, c.encode());
                }
                match c {
                    Child::Node(j) => parent.set(j, (p as u64) << 1 | side),
                    Child::Leaf(s) => leaf_parent.set(s as usize, (p as u64) << 1 | side),
                }
            }
        }
        drop((left, right, pre, order, size));

        let mut bv = BitVector::new(total as usize);
        let mut fill = vec![0u64; internal];
        for s in seq.iter() {
            let l = lens[s as usize];
            let mut node = 0usize;
            for d in (0..l).rev() {
                let bit = codes[s as usize] >> d & 1 == 1;
                let pos = offsets.get(node) + fill[node];
                fill[node] += 1;
                if bit {
                    bv.set(pos as usize, true);
                }
                if d > 0 {
                    let c = if bit { rv.get(node) } else { lv.get(node) };
                    node = (c >> 1) as usize;
                }
            }
        }
        drop(fill);
        let max_len = lens.iter().copied().max().unwrap_or(0) as u64;
        let code_len = IntVector::from_slice(
            &lens.iter().map(|&l| l as u64).collect::<Vec<_>>(),
            bits_for(max_len),
        )?;
        let code = IntVector::from_slice(&codes, bits_for(codes.iter().copied().max().unwrap_or(0)))?;
        Ok(HuffmanWt {
            len,
            sigma,
            bits: B::from_bitvector(&bv),
            offsets,
            left: lv,
            right: rv,
            parent,
            code_len,
            code,
            leaf_parent,
            lone,
        })
    }

    pub fn from_slice(seq: &[u64], sigma: u64) -> Result<Self> {
        let iv = IntVector::from_slice(seq, bits_for(sigma.saturating_sub(1))).map_err(|_| {
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

    pub fn internal_nodes(&self) -> usize {
        self.offsets.len()
    }

    /// Code length of `s`; 0 for absent symbols and for a lone symbol.
    pub fn code_len(&self, s: u64) -> u8 {
        self.code_len.get(s as usize) as u8
    }

    pub fn code(&self, s: u64) -> u64 {
        self.code.get(s as usize)
    }

    /// Total stored tree bits, the sum over symbols of `freq · code length`.
    pub fn total_bits(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    fn node_range(&self, k: usize) -> (usize, usize) {
        let start = self.offsets.get(k) as usize;
        let end = if k + 1 < self.offsets.len() {
            self.offsets.get(k + 1) as usize
        } else {
            self.bits.len()
        };
        (start, end)
    }

    pub fn access(&self, i: usize) -> Result<u64> {
        self.access_rank(i).map(|(s, _)| s)
    }

    /// Symbol at `i` and its number of occurrences in `[0, i)`.
    pub fn access_rank(&self, i: usize) -> Result<(u64, usize)> {
        if i >= self.len {
            return Err(out_of_range(i, self.len));
        }
        if self.internal_nodes() == 0 {
            return Ok((self.lone.expect("non-empty sequence"), i));
        }
        let mut node = 0usize;
        let mut p = i;
        loop {
            let (start, _) = self.node_range(node);
            let (bit, r1) = self.bits.access_rank1(start + p);
            let r1_start = self.bits.rank1(start);
            let c = if bit {
                p = r1 - r1_start;
                self.right.get(node)
            } else {
                p = (start + p - r1) - (start - r1_start);
                self.left.get(node)
            };
            match Child::decode(c) {
                Child::Leaf(s) => return Ok((s, p)),
                Child::Node(k) => node = k,
            }
        }
    }

    /// Occurrences of `s` in `[0, i)`.
    pub fn rank(&self, i: usize, s: u64) -> Result<usize> {
        if i > self.len {
            return Err(out_of_range(i, self.len));
        }
        if s >= self.sigma {
            return Err(Error::SymbolRange { symbol: s, sigma: self.sigma });
        }
        let l = self.code_len(s);
        if l == 0 {
            return Ok(if self.lone == Some(s) { i } else { 0 });
        }
        let code = self.code(s);
        let mut node = 0usize;
        let mut p = i;
        for d in (0..l).rev() {
            let (start, _) = self.node_range(node);
            let r1_start = self.bits.rank1(start);
            let r1 = self.bits.rank1(start + p);
            let bit = code >> d & 1 == 1;
            p = if bit { r1 - r1_start } else { p - (r1 - r1_start) };
            if p == 0 {
                return Ok(0);
            }
            if d > 0 {
                let c = if bit { self.right.get(node) } else { self.left.get(node) };
                node = (c >> 1) as usize;
            }
        }
        Ok(p)
    }

    /// Position of the `j`-th occurrence of `s`, 1-indexed.
    pub fn select(&self, j: usize, s: u64) -> Result<usize> {
        let total = self.rank(self.len, s)?;
        if j == 0 || j > total {
            return Err(out_of_range(j, total));
        }
        if self.code_len(s) == 0 {
            return Ok(j - 1);
        }
        let mut link = self.leaf_parent.get(s as usize);
        let mut pos = j - 1;
        loop {
            let node = (link >> 1) as usize;
            let (start, _) = self.node_range(node);
            let global = if link & 1 == 1 {
                self.bits.select1(self.bits.rank1(start) + pos + 1)
            } else {
                self.bits.select0(self.bits.rank0(start) + pos + 1)
            }
            .expect("occurrence exists on the path");
            pos = global - start;
            if node == 0 {
                return Ok(pos);
            }
            link = self.parent.get(node);
        }
    }
}

impl<B: BitBackend> Persist for HuffmanWt<B> {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &WT_MAGIC)?;
        persist::write_u8(w, Shape::Huffman.tag())?;
        persist::write_u64(w, self.sigma)?;
        persist::write_u8(w, B::KIND.tag())?;
        persist::write_u64(w, self.len as u64)?;
        persist::write_u64(w, self.lone.unwrap_or(u64::MAX))?;
        node.child(self.bits.write_to(w, "bits")?);
        node.child(self.offsets.write_to(w, "offsets")?);
        node.child(self.left.write_to(w, "left")?);
        node.child(self.right.write_to(w, "right")?);
        node.child(self.parent.write_to(w, "parent")?);
        node.child(self.code_len.write_to(w, "code_len")?);
        node.child(self.code.write_to(w, "code")?);
        node.child(self.leaf_parent.write_to(w, "leaf_parent")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &WT_MAGIC)?;
        if persist::read_u8(r)? != Shape::Huffman.tag() {
            return Err(Error::Format("expected a Huffman wavelet tree".into()));
        }
        let sigma = persist::read_u64(r)?;
        if persist::read_u8(r)? != B::KIND.tag() {
            return Err(Error::Format("wavelet tree backend mismatch".into()));
        }
        let len = persist::read_usize(r)?;
        let lone = Some(persist::read_u64(r)?).filter(|&s| s != u64::MAX);
        let wt = HuffmanWt {
            len,
            sigma,
            bits: B::read_from(r)?,
            offsets: IntVector::read_from(r)?,
            left: IntVector::read_from(r)?,
            right: IntVector::read_from(r)?,
            parent: IntVector::read_from(r)?,
            code_len: IntVector::read_from(r)?,
            code: IntVector::read_from(r)?,
            leaf_parent: IntVector::read_from(r)?,
            lone,
        };
        let k = wt.offsets.len();
        if wt.left.len() != k
            || wt.right.len() != k
            || wt.parent.len() != k
            || wt.code_len.len() as u64 != sigma
            || wt.code.len() as u64 != sigma
            || wt.leaf_parent.len() as u64 != sigma
        {
            return Err(Error::Format("inconsistent Huffman wavelet tree".into()));
        }
        Ok(wt)
    }
}
