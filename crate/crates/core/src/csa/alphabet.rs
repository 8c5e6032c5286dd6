//! Symbol counts and the mapping between SA positions and first symbols.

use std::io::{Read, Write};

use crate::construct::{symbol_counts, Mode, SymbolSource};
use crate::error::{Error, Result};
use crate::intvec::{bits_for, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCALPH";

/// `cnt[c]` is the number of text symbols smaller than `c`; `cnt[σ] = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    mode: Mode,
    cnt: IntVector,
}

impl Alphabet {
    pub fn from_counts(cnt: &[u64], mode: Mode) -> Result<Self> {
        if cnt.len() < 2 || cnt[0] != 0 || cnt.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("count table must start at 0 and be nondecreasing".into()));
        }
        let n = *cnt.last().unwrap();
        Ok(Alphabet { mode, cnt: IntVector::from_slice(cnt, bits_for(n))? })
    }

    pub fn from_text<S: SymbolSource + ?Sized>(text: &S, sigma: u64, mode: Mode) -> Result<Self> {
        Self::from_counts(&symbol_counts(text, sigma)?, mode)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn sigma(&self) -> u64 {
        (self.cnt.len() - 1) as u64
    }

    /// Text length.
    pub fn len(&self) -> usize {
        self.cnt.get(self.cnt.len() - 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Suffixes starting with a symbol smaller than `c`.
    #[inline]
    pub fn cnt(&self, c: u64) -> usize {
        self.cnt.get(c as usize) as usize
    }

    /// Occurrences of `c` in the text.
    #[inline]
    pub fn occurrences(&self, c: u64) -> usize {
        self.cnt(c + 1) - self.cnt(c)
    }

    /// First symbol of the suffix at SA position `i`.
    pub fn symbol_of(&self, i: usize) -> u64 {
        debug_assert!(i < self.len());
        // Largest c with cnt[c] <= i.
        let (mut lo, mut hi) = (0usize, self.cnt.len() - 1);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cnt.get(mid) as usize <= i {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo as u64
    }

    /// Half-open SA range of suffixes starting with `c`, empty when `c ≥ σ`.
    pub fn range_of(&self, c: u64) -> (usize, usize) {
        if c >= self.sigma() {
            return (0, 0);
        }
        (self.cnt(c), self.cnt(c + 1))
    }
}

impl Persist for Alphabet {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        persist::write_u8(w, self.mode.tag())?;
        node.child(self.cnt.write_to(w, "cnt")?);
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let mode = Mode::from_tag(persist::read_u8(r)?)?;
        let cnt = IntVector::read_from(r)?;
        if cnt.len() < 2 {
            return Err(Error::Format("empty count table".into()));
        }
        Ok(Alphabet { mode, cnt })
    }
}
