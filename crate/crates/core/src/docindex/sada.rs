//! SADA: document listing by range minimum queries over the previous and
//! next occurrence arrays, term frequencies from per-document inverse SAs.

use std::io::{Read, Write};
use std::sync::Mutex;

use super::{check_parts, doc_interval, rank_hits, Algo, DocumentIndex, Hit, IndexHeader, Ranking};
use crate::bitvec::{BitRank, BitVector, PlainBitVector};
use crate::csa::{CsaPsi, SuffixArrayIndex};
use crate::error::{Error, Result};
use crate::intvec::IntVector;
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::rmq::RmqSct;
use crate::tooling::size::SizeTree;

/// A document together with the SA index and text position of one of its
/// occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub doc: usize,
    pub index: usize,
    pub pos: usize,
}

#[derive(Debug)]
pub struct SadaIndex {
    csa: CsaPsi,
    border: PlainBitVector,
    rminq: RmqSct,
    rmaxq: RmqSct,
    doc_isa: Vec<IntVector>,
    pool: Mutex<Vec<BitVector>>,
}

impl SadaIndex {
    pub fn from_parts(
        csa: CsaPsi,
        border: PlainBitVector,
        rminq: RmqSct,
        rmaxq: RmqSct,
        doc_isa: Vec<IntVector>,
    ) -> Result<Self> {
        let n = csa.len();
        let docs = border.count_ones();
        if border.len() != n || rminq.len() != n || rmaxq.len() != n || doc_isa.len() != docs {
            return Err(Error::InvalidArgument("SADA components disagree in size".into()));
        }
        let border = if border.has_select() { border } else { PlainBitVector::new(border.bits().clone()) };
        Ok(SadaIndex { csa, border, rminq, rmaxq, doc_isa, pool: Mutex::new(Vec::new()) })
    }

    pub fn csa(&self) -> &CsaPsi {
        &self.csa
    }

    pub fn border(&self) -> &PlainBitVector {
        &self.border
    }

    pub fn doc_isa(&self, d: usize) -> &IntVector {
        &self.doc_isa[d]
    }

    /// Text position where document `d` starts.
    pub fn doc_offset(&self, d: usize) -> usize {
        if d == 0 {
            0
        } else {
            self.border.select1(d).expect("document exists") + 1
        }
    }

    fn occurrence(&self, x: usize) -> Occurrence {
        let pos = self.csa.sa(x).expect("index in range");
        Occurrence { doc: self.border.rank1(pos), index: x, pos }
    }

    fn take_marks(&self) -> BitVector {
        let mut pool = self.pool.lock().unwrap_or_else(|e| e.into_inner());
        pool.pop().unwrap_or_else(|| BitVector::new(self.num_docs()))
    }

    fn return_marks(&self, mut marks: BitVector, set: &[Occurrence]) {
        for o in set {
            marks.set(o.doc, false);
        }
        debug_assert_eq!(marks.count_ones(), 0);
        self.pool.lock().unwrap_or_else(|e| e.into_inner()).push(marks);
    }

    /// Every distinct document of `D[sp..=ep]` with its leftmost occurrence,
    /// in the order the listing finds them.
    pub fn distinct_docs(&self, sp: usize, ep: usize) -> Vec<Occurrence> {
        let mut marks = self.take_marks();
        let out = self.list(sp, ep, &mut marks, true);
        self.return_marks(marks, &out);
        out
    }

    /// Every distinct document of `D[sp..=ep]` with its rightmost occurrence.
    pub fn distinct_docs_rightmost(&self, sp: usize, ep: usize) -> Vec<Occurrence> {
        let mut marks = self.take_marks();
        let out = self.list(sp, ep, &mut marks, false);
        self.return_marks(marks, &out);
        out
    }

    /// Depth-first listing. Leftmost mode visits left subranges first using
    /// the minimum of the previous-occurrence array; the first time a
    /// document shows up is then its leftmost occurrence, and a range whose
    /// minimum belongs to an already listed document holds no new ones.
    /// Rightmost mode mirrors this with the next-occurrence maximum.
    fn list(&self, sp: usize, ep: usize, marks: &mut BitVector, leftmost: bool) -> Vec<Occurrence> {
        let rmq = if leftmost { &self.rminq } else { &self.rmaxq };
        let mut out = Vec::new();
        let mut stack = vec![(sp, ep)];
        while let Some((a, b)) = stack.pop() {
            let x = rmq.query(a, b).expect("range in bounds");
            let o = self.occurrence(x);
            if o.doc >= marks.len() || marks.get(o.doc) {
                continue;
            }
            marks.set(o.doc, true);
            out.push(o);
            let left = (x > a).then(|| (a, x - 1));
            let right = (x < b).then(|| (x + 1, b));
            let (first, second) = if leftmost { (left, right) } else { (right, left) };
            stack.extend(second);
            stack.extend(first);
        }
        out
    }

    /// Frequency of `doc` between its leftmost and rightmost occurrences,
    /// given as text positions.
    pub fn tf(&self, doc: usize, left_pos: usize, right_pos: usize) -> usize {
        let off = self.doc_offset(doc);
        let isa = &self.doc_isa[doc];
        (isa.get(right_pos - off) - isa.get(left_pos - off)) as usize + 1
    }

    /// `(doc, tf)` for every document in `[sp, ep]`, ordered by doc id.
    pub fn doc_frequencies(&self, sp: usize, ep: usize) -> Vec<(usize, usize)> {
        let mut left = self.distinct_docs(sp, ep);
        let mut right = self.distinct_docs_rightmost(sp, ep);
        left.sort_unstable_by_key(|o| o.doc);
        right.sort_unstable_by_key(|o| o.doc);
        debug_assert_eq!(left.len(), right.len());
        left.iter().zip(&right).map(|(l, r)| (l.doc, self.tf(l.doc, l.pos, r.pos))).collect()
    }

    pub(crate) fn write_parts<W: Write>(&self, w: &mut CountingWriter<W>) -> Result<Vec<SizeTree>> {
        let mut out = vec![
            self.csa.write_to(w, "csa_full")?,
            self.border.write_to(w, "border")?,
            self.rminq.write_to(w, "rminq")?,
            self.rmaxq.write_to(w, "rmaxq")?,
        ];
        let node = NodeBuilder::open("doc_isa", w);
        persist::write_u64(w, self.doc_isa.len() as u64)?;
        for isa in &self.doc_isa {
            isa.write_to(w, "isa")?;
        }
        out.push(node.close(w));
        Ok(out)
    }

    pub(crate) fn read_parts<R: Read>(r: &mut R, h: &IndexHeader) -> Result<Self> {
        let csa = CsaPsi::read_from(r)?;
        let border = PlainBitVector::read_from(r)?;
        let rminq = RmqSct::read_from(r)?;
        let rmaxq = RmqSct::read_from(r)?;
        let docs = persist::read_usize(r)?;
        check_parts(docs == h.num_docs && border.has_select(), "SADA")?;
        let doc_isa = (0..docs).map(|_| IntVector::read_from(r)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(csa, border, rminq, rmaxq, doc_isa).map_err(|e| Error::Format(e.to_string()))
    }
}

impl DocumentIndex for SadaIndex {
    fn algo(&self) -> Algo {
        Algo::Sada
    }

    fn num_docs(&self) -> usize {
        self.doc_isa.len()
    }

    fn text_len(&self) -> usize {
        self.csa.len()
    }

    fn interval(&self, pattern: &[u64]) -> Option<(usize, usize)> {
        doc_interval(&self.csa, pattern)
    }

    fn df(&self, pattern: &[u64]) -> usize {
        match self.interval(pattern) {
            Some((sp, ep)) => self.distinct_docs(sp, ep).len(),
            None => 0,
        }
    }

    fn topk(&self, pattern: &[u64], k: usize, ranking: Ranking) -> Vec<Hit> {
        let Some((sp, ep)) = self.interval(pattern) else {
            return Vec::new();
        };
        let freqs = self.doc_frequencies(sp, ep);
        let df = freqs.len();
        rank_hits(freqs, k, df, self.num_docs(), ranking)
    }
}
