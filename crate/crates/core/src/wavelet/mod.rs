//! Wavelet trees over integer sequences.
//!
//! [`BalancedWt`] supports node expansion and is what document listing walks;
//! [`HuffmanWt`] is the compressed shape used over the BWT. Both are generic
//! over the level bitvector backend. [`WaveletTree`] erases the shape and
//! backend for callers that pick them at run time.

mod balanced;
mod huffman;

use std::io::{Read, Write};

pub use balanced::{BalancedWt, WtNode};
pub use huffman::{canonical_codes, code_lengths, HuffmanWt};

use crate::bitvec::{BackendKind, PlainBitVector};
use crate::compressed::RrrVector;
use crate::error::{Error, Result};
use crate::intvec::IntVector;
use crate::persist::{self, CountingWriter, Persist};
use crate::tooling::size::SizeTree;

pub(crate) const WT_MAGIC: persist::Magic = *b"SUCCWTRE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Balanced,
    Huffman,
}

impl Shape {
    pub fn tag(self) -> u8 {
        match self {
            Shape::Balanced => 0,
            Shape::Huffman => 1,
        }
    }
}

pub(crate) fn check_symbols(seq: impl Iterator<Item = u64>, sigma: u64) -> Result<()> {
    for s in seq {
        if s >= sigma {
            return Err(Error::SymbolRange { symbol: s, sigma });
        }
    }
    Ok(())
}

/// A wavelet tree with shape and backend chosen at run time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WaveletTree {
    BalancedPlain(BalancedWt<PlainBitVector>),
    BalancedRrr(BalancedWt<RrrVector>),
    HuffmanPlain(HuffmanWt<PlainBitVector>),
    HuffmanRrr(HuffmanWt<RrrVector>),
}

macro_rules! dispatch {
    ($self:expr, $wt:ident => $e:expr) => {
        match $self {
            WaveletTree::BalancedPlain($wt) => $e,
            WaveletTree::BalancedRrr($wt) => $e,
            WaveletTree::HuffmanPlain($wt) => $e,
            WaveletTree::HuffmanRrr($wt) => $e,
        }
    };
}

impl WaveletTree {
    pub fn build(seq: &IntVector, sigma: u64, shape: Shape, backend: BackendKind) -> Result<Self> {
        Ok(match (shape, backend) {
            (Shape::Balanced, BackendKind::Plain) => WaveletTree::BalancedPlain(BalancedWt::new(seq, sigma)?),
            (Shape::Balanced, BackendKind::Rrr) => WaveletTree::BalancedRrr(BalancedWt::new(seq, sigma)?),
            (Shape::Huffman, BackendKind::Plain) => WaveletTree::HuffmanPlain(HuffmanWt::new(seq, sigma)?),
            (Shape::Huffman, BackendKind::Rrr) => WaveletTree::HuffmanRrr(HuffmanWt::new(seq, sigma)?),
        })
    }

    pub fn shape(&self) -> Shape {
        match self {
            WaveletTree::BalancedPlain(_) | WaveletTree::BalancedRrr(_) => Shape::Balanced,
            WaveletTree::HuffmanPlain(_) | WaveletTree::HuffmanRrr(_) => Shape::Huffman,
        }
    }

    pub fn backend(&self) -> BackendKind {
        match self {
            WaveletTree::BalancedPlain(_) | WaveletTree::HuffmanPlain(_) => BackendKind::Plain,
            WaveletTree::BalancedRrr(_) | WaveletTree::HuffmanRrr(_) => BackendKind::Rrr,
        }
    }

    pub fn len(&self) -> usize {
        dispatch!(self, wt => wt.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sigma(&self) -> u64 {
        dispatch!(self, wt => wt.sigma())
    }

    pub fn access(&self, i: usize) -> Result<u64> {
        dispatch!(self, wt => wt.access(i))
    }

    pub fn rank(&self, i: usize, s: u64) -> Result<usize> {
        dispatch!(self, wt => wt.rank(i, s))
    }

    pub fn select(&self, j: usize, s: u64) -> Result<usize> {
        dispatch!(self, wt => wt.select(j, s))
    }

    pub fn total_bits(&self) -> usize {
        dispatch!(self, wt => wt.total_bits())
    }
}

impl Persist for WaveletTree {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        dispatch!(self, wt => wt.write_to(w, name))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        // Peek the shape and backend tags, then replay the header.
        let mut head = [0u8; 8 + 1 + 1 + 8 + 1];
        persist::read_exact(r, &mut head)?;
        let shape = head[9];
        let backend = head[18];
        let mut chained = std::io::Read::chain(&head[..], r);
        Ok(match (shape, backend) {
            (0, 0) => WaveletTree::BalancedPlain(BalancedWt::read_from(&mut chained)?),
            (0, 1) => WaveletTree::BalancedRrr(BalancedWt::read_from(&mut chained)?),
            (1, 0) => WaveletTree::HuffmanPlain(HuffmanWt::read_from(&mut chained)?),
            (1, 1) => WaveletTree::HuffmanRrr(HuffmanWt::read_from(&mut chained)?),
            _ => return Err(Error::Format(format!("unknown wavelet tree tags {shape}/{backend}"))),
        })
    }
}
