//! Top-k document retrieval: SADA, GREEDY and SORT.
//!
//! All three share one ranking contract: hits are ordered by term frequency
//! descending, then document id ascending. With tf-idf the score of a
//! single-term query is `tf · ln(N / df)`, a per-query multiple of tf, so
//! the order is the same in both modes.

mod build;
mod greedy;
mod sada;
mod sort;

pub use build::{build_index, BuildOptions, GREEDY_PHASES, SADA_PHASES, SORT_PHASES};
pub use greedy::GreedyIndex;
pub use sada::SadaIndex;
pub use sort::SortIndex;

use std::fmt;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::construct::{map_pattern, Mode, Vocabulary};
use crate::csa::SuffixArrayIndex;
use crate::error::{Error, Result};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCDIDX";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    Sada,
    Greedy,
    Sort,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::Sada, Algo::Greedy, Algo::Sort];

    pub fn tag(self) -> u8 {
        match self {
            Algo::Sada => 0,
            Algo::Greedy => 1,
            Algo::Sort => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Algo::Sada),
            1 => Ok(Algo::Greedy),
            2 => Ok(Algo::Sort),
            _ => Err(Error::Format(format!("unknown algorithm tag {tag}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algo::Sada => "sada",
            Algo::Greedy => "greedy",
            Algo::Sort => "sort",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sada" => Ok(Algo::Sada),
            "greedy" => Ok(Algo::Greedy),
            "sort" => Ok(Algo::Sort),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Ranking {
    #[default]
    Frequency,
    TfIdf,
}

impl FromStr for Ranking {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "freq" | "frequency" => Ok(Ranking::Frequency),
            "tfidf" | "tf-idf" => Ok(Ranking::TfIdf),
            _ => Err(Error::InvalidArgument(format!("unknown ranking '{s}'"))),
        }
    }
}

/// One ranked document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub doc: usize,
    pub tf: usize,
    pub score: f64,
}

/// `tf · ln(N / df)` or plain tf.
pub fn score(ranking: Ranking, tf: usize, df: usize, num_docs: usize) -> f64 {
    match ranking {
        Ranking::Frequency => tf as f64,
        Ranking::TfIdf => tf as f64 * (num_docs as f64 / df as f64).ln(),
    }
}

/// Orders `(doc, tf)` pairs and keeps the best `k` as scored hits.
pub(crate) fn rank_hits(mut pairs: Vec<(usize, usize)>, k: usize, df: usize, num_docs: usize, ranking: Ranking) -> Vec<Hit> {
    let order = |a: &(usize, usize), b: &(usize, usize)| b.1.cmp(&a.1).then(a.0.cmp(&b.0));
    if pairs.len() > k && k > 0 {
        pairs.select_nth_unstable_by(k - 1, order);
    }
    pairs.truncate(k);
    pairs.sort_unstable_by(order);
    pairs
        .into_iter()
        .map(|(doc, tf)| Hit { doc, tf, score: score(ranking, tf, df, num_docs) })
        .collect()
}

/// Inclusive SA interval of `pattern` with the `$`-suffix (SA index 0,
/// belonging to no document) removed.
pub(crate) fn doc_interval<C: SuffixArrayIndex + ?Sized>(csa: &C, pattern: &[u64]) -> Option<(usize, usize)> {
    let (sp, ep) = csa.backward_search(pattern)?;
    let sp = sp.max(1);
    (sp <= ep).then_some((sp, ep))
}

/// Queries shared by the three indexes. Patterns are symbol sequences.
pub trait DocumentIndex {
    fn algo(&self) -> Algo;

    fn num_docs(&self) -> usize;

    /// Text length `n`.
    fn text_len(&self) -> usize;

    /// Inclusive suffix interval of matching document suffixes.
    fn interval(&self, pattern: &[u64]) -> Option<(usize, usize)>;

    /// Number of documents containing `pattern`.
    fn df(&self, pattern: &[u64]) -> usize;

    /// The `k` best documents for `pattern`.
    fn topk(&self, pattern: &[u64], k: usize, ranking: Ranking) -> Vec<Hit>;
}

/// Header fields common to every index file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexHeader {
    pub algo: Algo,
    pub mode: Mode,
    pub num_docs: usize,
    pub len: usize,
}

/// A loaded index of any kind plus its vocabulary in word mode.
#[derive(Debug)]
pub struct DocIndex {
    mode: Mode,
    vocab: Option<Vocabulary>,
    inner: Inner,
}

#[derive(Debug)]
enum Inner {
    Sada(SadaIndex),
    Greedy(GreedyIndex),
    Sort(SortIndex),
}

macro_rules! dispatch {
    ($self:expr, $x:ident => $e:expr) => {
        match &$self.inner {
            Inner::Sada($x) => $e,
            Inner::Greedy($x) => $e,
            Inner::Sort($x) => $e,
        }
    };
}

impl DocIndex {
    pub fn from_sada(idx: SadaIndex, mode: Mode, vocab: Option<Vocabulary>) -> Self {
        DocIndex { mode, vocab, inner: Inner::Sada(idx) }
    }

    pub fn from_greedy(idx: GreedyIndex, mode: Mode, vocab: Option<Vocabulary>) -> Self {
        DocIndex { mode, vocab, inner: Inner::Greedy(idx) }
    }

    pub fn from_sort(idx: SortIndex, mode: Mode, vocab: Option<Vocabulary>) -> Self {
        DocIndex { mode, vocab, inner: Inner::Sort(idx) }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vocab(&self) -> Option<&Vocabulary> {
        self.vocab.as_ref()
    }

    pub fn header(&self) -> IndexHeader {
        IndexHeader { algo: self.algo(), mode: self.mode, num_docs: self.num_docs(), len: self.text_len() }
    }

    pub fn as_sada(&self) -> Option<&SadaIndex> {
        match &self.inner {
            Inner::Sada(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_greedy(&self) -> Option<&GreedyIndex> {
        match &self.inner {
            Inner::Greedy(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_sort(&self) -> Option<&SortIndex> {
        match &self.inner {
            Inner::Sort(x) => Some(x),
            _ => None,
        }
    }

    /// Maps raw pattern bytes (bytes, or whitespace-separated tokens in word
    /// mode) to symbols; `None` when the pattern cannot occur.
    pub fn map_pattern(&self, pattern: &[u8]) -> Option<Vec<u64>> {
        map_pattern(self.mode, self.vocab.as_ref(), pattern)
    }

    /// Top-k over a raw pattern.
    pub fn query(&self, pattern: &[u8], k: usize, ranking: Ranking) -> Vec<Hit> {
        match self.map_pattern(pattern) {
            Some(p) => self.topk(&p, k, ranking),
            None => Vec::new(),
        }
    }

    /// Path of the vocabulary stored next to a word-mode index.
    pub fn vocab_path(index: &Path) -> PathBuf {
        let mut s = index.as_os_str().to_owned();
        s.push(".vocab");
        PathBuf::from(s)
    }

    /// Writes the index and, in word mode, its vocabulary sidecar.
    pub fn save_with_vocab(&self, path: &Path) -> Result<SizeTree> {
        let mut w = CountingWriter::new(BufWriter::new(std::fs::File::create(path)?));
        let tree = self.write_to(&mut w, "index")?;
        w.flush()?;
        if let Some(v) = &self.vocab {
            v.save(&Self::vocab_path(path))?;
        }
        Ok(tree)
    }

    /// Reads an index and, in word mode, its vocabulary sidecar.
    pub fn load_with_vocab(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(std::fs::File::open(path)?);
        let mut idx = Self::read_from(&mut r)?;
        if idx.mode == Mode::Word {
            let vp = Self::vocab_path(path);
            idx.vocab = Some(Vocabulary::load(&vp).map_err(|e| {
                Error::Format(format!("word-mode index needs its vocabulary {}: {e}", vp.display()))
            })?);
        }
        Ok(idx)
    }

    /// Reads only the header of an index file.
    pub fn read_header<R: Read>(r: &mut R) -> Result<IndexHeader> {
        persist::read_header(r, &MAGIC)?;
        let algo = Algo::from_tag(persist::read_u8(r)?)?;
        let mode = Mode::from_tag(persist::read_u8(r)?)?;
        let num_docs = persist::read_usize(r)?;
        let len = persist::read_usize(r)?;
        Ok(IndexHeader { algo, mode, num_docs, len })
    }
}

impl DocumentIndex for DocIndex {
    fn algo(&self) -> Algo {
        dispatch!(self, x => x.algo())
    }

    fn num_docs(&self) -> usize {
        dispatch!(self, x => x.num_docs())
    }

    fn text_len(&self) -> usize {
        dispatch!(self, x => x.text_len())
    }

    fn interval(&self, pattern: &[u64]) -> Option<(usize, usize)> {
        dispatch!(self, x => x.interval(pattern))
    }

    fn df(&self, pattern: &[u64]) -> usize {
        dispatch!(self, x => x.df(pattern))
    }

    fn topk(&self, pattern: &[u64], k: usize, ranking: Ranking) -> Vec<Hit> {
        dispatch!(self, x => x.topk(pattern, k, ranking))
    }
}

impl Persist for DocIndex {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        persist::write_u8(w, self.algo().tag())?;
        persist::write_u8(w, self.mode.tag())?;
        persist::write_u64(w, self.num_docs() as u64)?;
        persist::write_u64(w, self.text_len() as u64)?;
        let children = dispatch!(self, x => x.write_parts(w)?);
        for c in children {
            node.child(c);
        }
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let h = Self::read_header(r)?;
        let inner = match h.algo {
            Algo::Sada => Inner::Sada(SadaIndex::read_parts(r, &h)?),
            Algo::Greedy => Inner::Greedy(GreedyIndex::read_parts(r, &h)?),
            Algo::Sort => Inner::Sort(SortIndex::read_parts(r, &h)?),
        };
        let idx = DocIndex { mode: h.mode, vocab: None, inner };
        if idx.num_docs() != h.num_docs || idx.text_len() != h.len {
            return Err(Error::Format("index header disagrees with its components".into()));
        }
        Ok(idx)
    }
}

pub(crate) fn check_parts(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Format(format!("inconsistent {what} index")))
    }
}

#[cfg(test)]
mod tests;
