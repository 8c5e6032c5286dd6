//! GREEDY: best-first traversal of a wavelet tree over the document array.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{Read, Write};

use super::{check_parts, doc_interval, score, Algo, DocumentIndex, Hit, IndexHeader, Ranking};
use crate::bitvec::PlainBitVector;
use crate::compressed::RrrVector;
use crate::csa::{CsaWt, SuffixArrayIndex};
use crate::error::{Error, Result};
use crate::persist::{CountingWriter, Persist};
use crate::tooling::size::SizeTree;
use crate::wavelet::{BalancedWt, WtNode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyIndex {
    csa: CsaWt<RrrVector>,
    wtd: BalancedWt<PlainBitVector>,
}

impl GreedyIndex {
    /// `wtd` is built over the document array with `σ = N + 1`.
    pub fn from_parts(csa: CsaWt<RrrVector>, wtd: BalancedWt<PlainBitVector>) -> Result<Self> {
        if wtd.len() != csa.len() || wtd.sigma() < 2 {
            return Err(Error::InvalidArgument("document wavelet tree does not match the CSA".into()));
        }
        Ok(GreedyIndex { csa, wtd })
    }

    pub fn csa(&self) -> &CsaWt<RrrVector> {
        &self.csa
    }

    pub fn wtd(&self) -> &BalancedWt<PlainBitVector> {
        &self.wtd
    }

    /// Leaves of `[sp, ep]` in order of decreasing size, ties broken by the
    /// smaller node id; stops after `limit` leaves.
    pub fn best_first(&self, sp: usize, ep: usize, limit: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        let root = self.wtd.root(sp, ep + 1).expect("interval in range");
        let mut heap: BinaryHeap<(usize, Reverse<u64>, Slot)> = BinaryHeap::new();
        heap.push((root.size(), Reverse(root.id), Slot(root)));
        while let Some((size, _, Slot(node))) = heap.pop() {
            if self.wtd.is_leaf(&node) {
                out.push((self.wtd.leaf_symbol(&node) as usize, size));
                if out.len() == limit {
                    break;
                }
                continue;
            }
            let (l, r) = self.wtd.expand(&node).expect("internal node");
            for c in [l, r] {
                if !c.is_empty() {
                    heap.push((c.size(), Reverse(c.id), Slot(c)));
                }
            }
        }
        out
    }

    /// Distinct documents in `[sp, ep]`, by full traversal.
    pub fn count_docs(&self, sp: usize, ep: usize) -> usize {
        let root = self.wtd.root(sp, ep + 1).expect("interval in range");
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(node) = stack.pop() {
            if self.wtd.is_leaf(&node) {
                count += 1;
                continue;
            }
            let (l, r) = self.wtd.expand(&node).expect("internal node");
            stack.extend([l, r].into_iter().filter(|c| !c.is_empty()));
        }
        count
    }

    pub(crate) fn write_parts<W: Write>(&self, w: &mut CountingWriter<W>) -> Result<Vec<SizeTree>> {
        Ok(vec![self.csa.write_to(w, "csa_full")?, self.wtd.write_to(w, "wtd")?])
    }

    pub(crate) fn read_parts<R: Read>(r: &mut R, h: &IndexHeader) -> Result<Self> {
        let csa = CsaWt::read_from(r)?;
        let wtd = BalancedWt::read_from(r)?;
        check_parts(wtd.sigma() == h.num_docs as u64 + 1, "GREEDY")?;
        Self::from_parts(csa, wtd)
    }
}

/// Heap payload; ordering is fully decided by the size and id in front.
#[derive(Debug, Clone, Copy)]
struct Slot(WtNode);

impl PartialEq for Slot {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Slot {}

impl PartialOrd for Slot {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slot {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

impl DocumentIndex for GreedyIndex {
    fn algo(&self) -> Algo {
        Algo::Greedy
    }

    fn num_docs(&self) -> usize {
        (self.wtd.sigma() - 1) as usize
    }

    fn text_len(&self) -> usize {
        self.csa.len()
    }

    fn interval(&self, pattern: &[u64]) -> Option<(usize, usize)> {
        doc_interval(&self.csa, pattern)
    }

    fn df(&self, pattern: &[u64]) -> usize {
        match self.interval(pattern) {
            Some((sp, ep)) => self.count_docs(sp, ep),
            None => 0,
        }
    }

    fn topk(&self, pattern: &[u64], k: usize, ranking: Ranking) -> Vec<Hit> {
        let Some((sp, ep)) = self.interval(pattern) else {
            return Vec::new();
        };
        let leaves = self.best_first(sp, ep, k);
        let df = match ranking {
            Ranking::Frequency => 0,
            Ranking::TfIdf => self.count_docs(sp, ep),
        };
        let n = self.num_docs();
        leaves.into_iter().map(|(doc, tf)| Hit { doc, tf, score: score(ranking, tf, df, n) }).collect()
    }
}
