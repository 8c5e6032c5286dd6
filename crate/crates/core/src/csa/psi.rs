//! Psi-based compressed suffix array.

use std::io::{Read, Write};

use super::{check_extract, Alphabet, SaSamples, SampleKind, SuffixArrayIndex};
use crate::bitvec::{BitBackend, BitRank, BitVector, PlainBitVector};
use crate::compressed::sd::low_width_for;
use crate::construct::{TERMINATOR, build_sa, psi_from_bwt, Mode, SymbolSource};
use crate::error::{out_of_range, Error, Result};
use crate::intvec::{bits_for, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const SEQ_MAGIC: persist::Magic = *b"SUCCPSIE";
const CSA_MAGIC: persist::Magic = *b"SUCCCSAP";

/// Psi split by first symbol: within the SA range of each symbol `c` the
/// values increase, and each such run is Elias-Fano coded on its own.
///
/// All high parts share one bitvector. Because every value contributes one
/// set bit, the `j`-th value of symbol `c` is the `(cnt[c] + j + 1)`-th one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiSequences {
    len: usize,
    low_width: IntVector,
    low_start: IntVector,
    lows: BitVector,
    high: PlainBitVector,
    high_start: IntVector,
}

impl PsiSequences {
    pub fn new(psi: &IntVector, alphabet: &Alphabet) -> Result<Self> {
        let n = psi.len();
        if n != alphabet.len() {
            return Err(Error::InvalidArgument(format!(
                "Psi has length {n} but the count table covers {}",
                alphabet.len()
            )));
        }
        let sigma = alphabet.sigma() as usize;
        let mut widths = Vec::with_capacity(sigma);
        let mut low_start = Vec::with_capacity(sigma + 1);
        let mut high_start = Vec::with_capacity(sigma + 1);
        let (mut lows_len, mut high_len) = (0usize, 0usize);
        for c in 0..sigma as u64 {
            let k = alphabet.occurrences(c);
            let w = if k == 0 { 0 } else { low_width_for(n, k) };
            widths.push(w as u64);
            low_start.push(lows_len as u64);
            high_start.push(high_len as u64);
            if k > 0 {
                lows_len += k * w as usize;
                high_len += k + ((n - 1) >> w) + 1;
            }
        }
        low_start.push(lows_len as u64);
        high_start.push(high_len as u64);

        let mut lows = BitVector::new(lows_len);
        let mut high = BitVector::new(high_len);
        for c in 0..sigma {
            let (lo, hi) = (alphabet.cnt(c as u64), alphabet.cnt(c as u64 + 1));
            let w = widths[c] as usize;
            let mask = (1u64 << w) - 1;
            let mut prev = None;
            for j in 0..hi - lo {
                let v = psi.get(lo + j);
                if v as usize >= n || prev.is_some_and(|p| p >= v) {
                    return Err(Error::InvalidArgument(format!("Psi is not increasing within symbol {c}")));
                }
                prev = Some(v);
                let low_pos = low_start[c] as usize + j * w;
                for b in 0..w {
                    if (v & mask) >> b & 1 == 1 {
                        lows.set(low_pos + b, true);
                    }
                }
                high.set(high_start[c] as usize + (v >> w) as usize + j, true);
            }
        }
        Ok(PsiSequences {
            len: n,
            low_width: IntVector::from_slice(&widths, 6)?,
            low_start: IntVector::from_slice(&low_start, bits_for(lows_len as u64))?,
            lows,
            high: PlainBitVector::with_select0(high),
            high_start: IntVector::from_slice(&high_start, bits_for(high_len as u64))?,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn low(&self, c: usize, j: usize, w: usize) -> u64 {
        if w == 0 {
            0
        } else {
            self.lows.get_bits(self.low_start.get(c) as usize + j * w, w)
        }
    }

    /// The `j`-th value of symbol `c`, whose range starts at `cnt_c`.
    #[inline]
    pub fn get(&self, c: u64, cnt_c: usize, j: usize) -> usize {
        let c = c as usize;
        let w = self.low_width.get(c) as usize;
        let pos = self.high.select1(cnt_c + j + 1).expect("value in range");
        let hi = pos - self.high_start.get(c) as usize - j;
        (hi << w) | self.low(c, j, w) as usize
    }

    /// Values of symbol `c` smaller than `x`, among `k` stored values.
    pub fn rank(&self, c: u64, cnt_c: usize, k: usize, x: usize) -> usize {
        if k == 0 || x == 0 {
            return 0;
        }
        if x >= self.len {
            return k;
        }
        let c = c as usize;
        let w = self.low_width.get(c) as usize;
        let start = self.high_start.get(c) as usize;
        let bucket = x >> w;
        let mut pos = if bucket == 0 {
            start
        } else {
            let zeros_before = start - cnt_c;
            self.high.select0(zeros_before + bucket).expect("bucket in range") + 1
        };
        let mut j = pos - start - bucket;
        let target = (x & ((1usize << w) - 1)) as u64;
        while j < k && self.high.access(pos) && self.low(c, j, w) < target {
            pos += 1;
            j += 1;
        }
        j
    }
}

impl Persist for PsiSequences {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &SEQ_MAGIC)?;
        persist::write_u64(w, self.len as u64)?;
        node.child(self.low_width.write_to(w, "low_width")?);
        node.child(self.low_start.write_to(w, "low_start")?);
        node.child(self.lows.write_to(w, "lows")?);
        node.child(self.high.write_to(w, "high")?);
        node.child(self.high_start.write_to(w, "high_start")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &SEQ_MAGIC)?;
        let len = persist::read_usize(r)?;
        let seq = PsiSequences {
            len,
            low_width: IntVector::read_from(r)?,
            low_start: IntVector::read_from(r)?,
            lows: BitVector::read_from(r)?,
            high: PlainBitVector::read_from(r)?,
            high_start: IntVector::read_from(r)?,
        };
        if seq.low_start.len() != seq.low_width.len() + 1 || seq.high_start.len() != seq.low_width.len() + 1 {
            return Err(Error::Format("inconsistent Psi directory".into()));
        }
        Ok(seq)
    }
}

/// Compressed suffix array over Psi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsaPsi {
    alphabet: Alphabet,
    psi: PsiSequences,
    samples: SaSamples,
}

impl CsaPsi {
    pub fn from_parts(alphabet: Alphabet, psi: &IntVector, samples: SaSamples) -> Result<Self> {
        if samples.len() != alphabet.len() {
            return Err(Error::InvalidArgument("sample length differs from text length".into()));
        }
        let psi = PsiSequences::new(psi, &alphabet)?;
        Ok(CsaPsi { alphabet, psi, samples })
    }

    /// Builds in memory from a text ending in a unique smallest symbol.
    pub fn build(text: &IntVector, sigma: u64, mode: Mode, kind: SampleKind, rate: usize) -> Result<Self> {
        let sa = build_sa(text, sigma)?;
        let alphabet = Alphabet::from_text(text, sigma, mode)?;
        let bwt = crate::construct::bwt(text, &sa);
        let psi = psi_from_bwt(&bwt, sigma)?;
        drop(bwt);
        let samples = SaSamples::build(&sa, kind, rate)?;
        Self::from_parts(alphabet, &psi, samples)
    }

    /// Builds from precomputed Psi and a suffix array stream.
    pub fn from_psi<S: SymbolSource + ?Sized>(
        alphabet: Alphabet,
        psi: &IntVector,
        sa: &S,
        kind: SampleKind,
        rate: usize,
    ) -> Result<Self> {
        let samples = SaSamples::build(sa, kind, rate)?;
        Self::from_parts(alphabet, psi, samples)
    }

    pub fn samples(&self) -> &SaSamples {
        &self.samples
    }

    #[inline]
    pub fn psi(&self, i: usize) -> usize {
        let c = self.alphabet.symbol_of(i);
        let cnt = self.alphabet.cnt(c);
        self.psi.get(c, cnt, i - cnt)
    }
}

impl SuffixArrayIndex for CsaPsi {
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
            if sp >= ep {
                return (0, 0);
            }
            let (lo, hi) = self.alphabet.range_of(c);
            if lo >= hi {
                return (0, 0);
            }
            let k = hi - lo;
            sp = lo + self.psi.rank(c, lo, k, sp);
            ep = lo + self.psi.rank(c, lo, k, ep);
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
                return Ok((v + n - steps % n) % n);
            }
            j = self.psi(j);
            steps += 1;
        }
    }

    fn isa(&self, p: usize) -> Result<usize> {
        let n = self.len();
        if p >= n {
            return Err(out_of_range(p, n));
        }
        let s = self.samples.rate();
        let mut r = self.samples.isa_sample(p / s);
        for _ in 0..p % s {
            r = self.psi(r);
        }
        Ok(r)
    }

    fn extract(&self, l: usize, r: usize) -> Result<Vec<u64>> {
        check_extract(l, r, self.len())?;
        let mut i = self.isa(l)?;
        let mut out = Vec::with_capacity(r - l + 1);
        for _ in l..=r {
            out.push(self.alphabet.symbol_of(i));
            i = self.psi(i);
        }
        Ok(out)
    }
}

impl Persist for CsaPsi {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &CSA_MAGIC)?;
        node.child(self.alphabet.write_to(w, "alphabet")?);
        node.child(self.samples.write_to(w, "samples")?);
        node.child(self.psi.write_to(w, "psi")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &CSA_MAGIC)?;
        let alphabet = Alphabet::read_from(r)?;
        let samples = SaSamples::read_from(r)?;
        let psi = PsiSequences::read_from(r)?;
        if psi.len() != alphabet.len() || samples.len() != alphabet.len() {
            return Err(Error::Format("inconsistent compressed suffix array".into()));
        }
        Ok(CsaPsi { alphabet, psi, samples })
    }
}
