//! SORT: copy the document array range, sort it and count runs.

use std::io::{Read, Write};

use super::{check_parts, doc_interval, rank_hits, Algo, DocumentIndex, Hit, IndexHeader, Ranking};
use crate::compressed::RrrVector;
use crate::csa::{CsaWt, SuffixArrayIndex};
use crate::error::{Error, Result};
use crate::intvec::IntVector;
use crate::persist::{CountingWriter, Persist};
use crate::tooling::size::SizeTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortIndex {
    csa: CsaWt<RrrVector>,
    d: IntVector,
    num_docs: usize,
}

impl SortIndex {
    /// `d` is the document array, with `N` marking the `$`-suffix.
    pub fn from_parts(csa: CsaWt<RrrVector>, d: IntVector, num_docs: usize) -> Result<Self> {
        if d.len() != csa.len() {
            return Err(Error::InvalidArgument("document array and CSA differ in length".into()));
        }
        Ok(SortIndex { csa, d, num_docs })
    }

    pub fn csa(&self) -> &CsaWt<RrrVector> {
        &self.csa
    }

    pub fn doc_array(&self) -> &IntVector {
        &self.d
    }

    /// `(doc, tf)` for every document in `[sp, ep]`, ordered by doc id.
    pub fn doc_frequencies(&self, sp: usize, ep: usize) -> Vec<(usize, usize)> {
        let mut docs: Vec<u64> = (sp..=ep).map(|i| self.d.get(i)).collect();
        docs.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for x in docs {
            match out.last_mut() {
                Some((d, tf)) if *d == x as usize => *tf += 1,
                _ => out.push((x as usize, 1)),
            }
        }
        out
    }

    pub(crate) fn write_parts<W: Write>(&self, w: &mut CountingWriter<W>) -> Result<Vec<SizeTree>> {
        Ok(vec![self.csa.write_to(w, "csa_full")?, self.d.write_to(w, "d")?])
    }

    pub(crate) fn read_parts<R: Read>(r: &mut R, h: &IndexHeader) -> Result<Self> {
        let csa = CsaWt::read_from(r)?;
        let d = IntVector::read_from(r)?;
        check_parts(d.len() == csa.len(), "SORT")?;
        Self::from_parts(csa, d, h.num_docs)
    }
}

impl DocumentIndex for SortIndex {
    fn algo(&self) -> Algo {
        Algo::Sort
    }

    fn num_docs(&self) -> usize {
        self.num_docs
    }

    fn text_len(&self) -> usize {
        self.csa.len()
    }

    fn interval(&self, pattern: &[u64]) -> Option<(usize, usize)> {
        doc_interval(&self.csa, pattern)
    }

    fn df(&self, pattern: &[u64]) -> usize {
        match self.interval(pattern) {
            Some((sp, ep)) => self.doc_frequencies(sp, ep).len(),
            None => 0,
        }
    }

    fn topk(&self, pattern: &[u64], k: usize, ranking: Ranking) -> Vec<Hit> {
        let Some((sp, ep)) = self.interval(pattern) else {
            return Vec::new();
        };
        let freqs = self.doc_frequencies(sp, ep);
        let df = freqs.len();
        rank_hits(freqs, k, df, self.num_docs, ranking)
    }
}
