//! Suffix array and inverse suffix array samples.

use std::io::{Read, Write};

use crate::bitvec::BitRank;
use crate::compressed::SdVector;
use crate::construct::SymbolSource;
use crate::error::{Error, Result};
use crate::intvec::{bits_for, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCSAMP";

/// Which suffix array entries are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleKind {
    /// Every entry whose value is a multiple of the rate. Any entry is
    /// reached in fewer than `rate` steps.
    TextOrder,
    /// Every entry whose index is a multiple of the rate.
    SuffixOrder,
}

impl SampleKind {
    pub fn tag(self) -> u8 {
        match self {
            SampleKind::TextOrder => 0,
            SampleKind::SuffixOrder => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(SampleKind::TextOrder),
            1 => Ok(SampleKind::SuffixOrder),
            _ => Err(Error::Format(format!("unknown sampling tag {tag}"))),
        }
    }
}

/// SA samples plus `ISA[j · rate]` for every `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaSamples {
    kind: SampleKind,
    rate: usize,
    len: usize,
    marks: Option<SdVector>,
    sa: IntVector,
    isa: IntVector,
}

impl SaSamples {
    /// Builds from a suffix array stream of length `n`. The rate is clamped
    /// to `[1, n]`.
    pub fn build<S: SymbolSource + ?Sized>(sa: &S, kind: SampleKind, rate: usize) -> Result<Self> {
        let n = sa.len();
        if n == 0 {
            return Err(Error::Empty("suffix array"));
        }
        let rate = rate.clamp(1, n);
        let width = bits_for((n - 1) as u64);
        let mut isa = IntVector::with_len(n.div_ceil(rate), width)?;
        let mut values = IntVector::new(match kind {
            SampleKind::TextOrder => bits_for(((n - 1) / rate) as u64),
            SampleKind::SuffixOrder => width,
        })?;
        let mut marked = Vec::new();
        let mut i = 0usize;
        sa.for_each_symbol(&mut |s| {
            let s = s as usize;
            if s % rate == 0 {
                isa.set(s / rate, i as u64);
            }
            match kind {
                SampleKind::TextOrder if s % rate == 0 => {
                    marked.push(i as u64);
                    values.push((s / rate) as u64);
                }
                SampleKind::SuffixOrder if i % rate == 0 => values.push(s as u64),
                _ => {}
            }
            i += 1;
        })?;
        values.shrink_to_fit();
        let marks = match kind {
            SampleKind::TextOrder => Some(SdVector::new(&marked, n)?),
            SampleKind::SuffixOrder => None,
        };
        Ok(SaSamples { kind, rate, len: n, marks, sa: values, isa })
    }

    pub fn kind(&self) -> SampleKind {
        self.kind
    }

    pub fn rate(&self) -> usize {
        self.rate
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of stored SA values.
    pub fn sa_samples(&self) -> usize {
        self.sa.len()
    }

    /// `SA[i]` when it is sampled.
    #[inline]
    pub fn sampled(&self, i: usize) -> Option<usize> {
        match &self.marks {
            Some(marks) => {
                let r = marks.rank1(i);
                if marks.rank1(i + 1) > r {
                    Some(self.sa.get(r) as usize * self.rate)
                } else {
                    None
                }
            }
            None => (i % self.rate == 0).then(|| self.sa.get(i / self.rate) as usize),
        }
    }

    /// `ISA[j · rate]`.
    #[inline]
    pub fn isa_sample(&self, j: usize) -> usize {
        self.isa.get(j) as usize
    }

    pub fn isa_samples(&self) -> usize {
        self.isa.len()
    }
}

impl Persist for SaSamples {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        persist::write_u8(w, self.kind.tag())?;
        persist::write_u64(w, self.rate as u64)?;
        persist::write_u64(w, self.len as u64)?;
        if let Some(m) = &self.marks {
            node.child(m.write_to(w, "marks")?);
        }
        node.child(self.sa.write_to(w, "sa")?);
        node.child(self.isa.write_to(w, "isa")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let kind = SampleKind::from_tag(persist::read_u8(r)?)?;
        let rate = persist::read_usize(r)?;
        let len = persist::read_usize(r)?;
        let marks = match kind {
            SampleKind::TextOrder => Some(SdVector::read_from(r)?),
            SampleKind::SuffixOrder => None,
        };
        let sa = IntVector::read_from(r)?;
        let isa = IntVector::read_from(r)?;
        if rate == 0 || rate > len || isa.len() != len.div_ceil(rate) {
            return Err(Error::Format("inconsistent sample descriptor".into()));
        }
        Ok(SaSamples { kind, rate, len, marks, sa, isa })
    }
}
