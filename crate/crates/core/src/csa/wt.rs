//! BWT wavelet-tree compressed suffix array.

use std::io::{Read, Write};

use super::{check_extract, Alphabet, SaSamples, SampleKind, SuffixArrayIndex};
use crate::bitvec::BitBackend;
use crate::compressed::RrrVector;
use crate::construct::{TERMINATOR, build_sa, bwt, Mode, SymbolSource};
use crate::error::{out_of_range, Error, Result};
use crate::intvec::IntVector;
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;
use crate::wavelet::HuffmanWt;

const MAGIC: persist::Magic = *b"SUCCCSAW";

/// Compressed suffix array storing the BWT in a Huffman-shaped wavelet tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsaWt<B = RrrVector> {
    alphabet: Alphabet,
    wt: HuffmanWt<B>,
    samples: SaSamples,
}

impl<B: BitBackend> CsaWt<B> {
    pub fn from_parts(alphabet: Alphabet, bwt: &IntVector, samples: SaSamples) -> Result<Self> {
        if bwt.len() != alphabet.len() || samples.len() != alphabet.len() {
            return Err(Error::InvalidArgument("BWT, samples and count table differ in length".into()));
        }
        let wt = HuffmanWt::new(bwt, alphabet.sigma())?;
        Ok(CsaWt { alphabet, wt, samples })
    }

    /// Builds in memory from a text ending in a unique smallest symbol.
    pub fn build(text: &IntVector, sigma: u64, mode: Mode, kind: SampleKind, rate: usize) -> Result<Self> {
        let sa = build_sa(text, sigma)?;
        let alphabet = Alphabet::from_text(text, sigma, mode)?;
        let l = bwt(text, &sa);
        let samples = SaSamples::build(&sa, kind, rate)?;
        Self::from_parts(alphabet, &l, samples)
    }

    /// Builds from a BWT and a suffix array stream.
    pub fn from_bwt<S: SymbolSource + ?Sized>(
        alphabet: Alphabet,
        bwt: &IntVector,
        sa: &S,
        kind: SampleKind,
        rate: usize,
    ) -> Result<Self> {
        let samples = SaSamples::build(sa, kind, rate)?;
        Self::from_parts(alphabet, bwt, samples)
    }

    pub fn samples(&self) -> &SaSamples {
        &self.samples
    }

    pub fn wavelet_tree(&self) -> &HuffmanWt<B> {
        &self.wt
    }

    /// `LF(i) = cnt[L[i]] + rank(L[i], i)`.
    #[inline]
    pub fn lf(&self, i: usize) -> usize {
        self.lf_symbol(i).0
    }

    #[inline]
    fn lf_symbol(&self, i: usize) -> (usize, u64) {
        let (c, r) = self.wt.access_rank(i).expect("position in range");
        (self.alphabet.cnt(c) + r, c)
    }
}

impl<B: BitBackend> SuffixArrayIndex for CsaWt<B> {
    fn len(&self) -> usize {
        self.alphabet.len()
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn range(&self, pattern: &[u64]) -> (usize, usize) {
        let Some((&last, rest)) = pattern.split_last() else {
            return (0, self.len());
        };
        // The terminator only ends the text; matching across it would wrap.
        if rest.contains(&TERMINATOR) {
            return (0, 0);
        }
        let (mut sp, mut ep) = self.alphabet.range_of(last);
        for &c in rest.iter().rev() {
            if sp >= ep || c >= self.alphabet.sigma() {
                return (0, 0);
            }
            let base = self.alphabet.cnt(c);
            sp = base + self.wt.rank(sp, c).expect("rank in range");
            ep = base + self.wt.rank(ep, c).expect("rank in range");
        }
        if sp >= ep {
            (0, 0)
        } else {
            (sp, ep)
        }
    }

    fn sa(&self, i: usize) -> Result<usize> {
        let n = self.len();
        if i >= n {
            return Err(out_of_range(i, n));
        }
        let mut j = i;
        let mut steps = 0usize;
        loop {
            if let Some(v) = self.samples.sampled(j) {
                return Ok((v + steps) % n);
            }
            j = self.lf(j);
            steps += 1;
        }
    }

    fn isa(&self, p: usize) -> Result<usize> {
        let n = self.len();
        if p >= n {
            return Err(out_of_range(p, n));
        }
        let s = self.samples.rate();
        let q = p.div_ceil(s) * s;
        let (mut r, steps) = if q >= n { (self.samples.isa_sample(0), n - p) } else { (self.samples.isa_sample(q / s), q - p) };
        for _ in 0..steps {
            r = self.lf(r);
        }
        Ok(r)
    }

    fn extract(&self, l: usize, r: usize) -> Result<Vec<u64>> {
        let n = self.len();
        check_extract(l, r, n)?;
        let mut i = self.isa((r + 1) % n)?;
        let mut out = Vec::with_capacity(r - l + 1);
        for _ in l..=r {
            let (next, c) = self.lf_symbol(i);
            out.push(c);
            i = next;
        }
        out.reverse();
        Ok(out)
    }
}

impl<B: BitBackend> Persist for CsaWt<B> {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        node.child(self.alphabet.write_to(w, "alphabet")?);
        node.child(self.samples.write_to(w, "samples")?);
        node.child(self.wt.write_to(w, "wt")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let alphabet = Alphabet::read_from(r)?;
        let samples = SaSamples::read_from(r)?;
        let wt = HuffmanWt::<B>::read_from(r)?;
        if wt.len() != alphabet.len() || samples.len() != alphabet.len() || wt.sigma() != alphabet.sigma() {
            return Err(Error::Format("inconsistent compressed suffix array".into()));
        }
        Ok(CsaWt { alphabet, wt, samples })
    }
}
