//! Brute-force reference implementations shared by the test targets.
#![allow(dead_code)]

use succdoc::construct::{Collection, Mode};
use succdoc::docindex::{build_index, Algo, BuildOptions, DocIndex};
use succdoc::synth::{gen_collection, CorpusSpec};

pub fn rank1(bits: &[bool], i: usize) -> usize {
    bits[..i].iter().filter(|&&b| b).count()
}

pub fn select(bits: &[bool], j: usize, bit: bool) -> Option<usize> {
    if j == 0 {
        return None;
    }
    bits.iter().enumerate().filter(|(_, &b)| b == bit).nth(j - 1).map(|(p, _)| p)
}

pub fn seq_rank(seq: &[u64], i: usize, s: u64) -> usize {
    seq[..i].iter().filter(|&&x| x == s).count()
}

pub fn seq_select(seq: &[u64], j: usize, s: u64) -> Option<usize> {
    if j == 0 {
        return None;
    }
    seq.iter().enumerate().filter(|(_, &x)| x == s).nth(j - 1).map(|(p, _)| p)
}

/// Suffix array by sorting suffix slices.
pub fn suffix_array(t: &[u64]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..t.len()).collect();
    sa.sort_by(|&a, &b| t[a..].cmp(&t[b..]));
    sa
}

pub fn inverse(sa: &[usize]) -> Vec<usize> {
    let mut isa = vec![0; sa.len()];
    for (i, &s) in sa.iter().enumerate() {
        isa[s] = i;
    }
    isa
}

pub fn bwt(t: &[u64], sa: &[usize]) -> Vec<u64> {
    let n = t.len();
    sa.iter().map(|&s| t[(s + n - 1) % n]).collect()
}

pub fn psi(sa: &[usize]) -> Vec<usize> {
    let n = sa.len();
    let isa = inverse(sa);
    sa.iter().map(|&s| isa[(s + 1) % n]).collect()
}

/// Leftmost minimum of `a[l..=r]`.
pub fn rmq_min(a: &[i64], l: usize, r: usize) -> usize {
    let mut best = l;
    for i in l..=r {
        if a[i] < a[best] {
            best = i;
        }
    }
    best
}

pub fn count_occurrences(t: &[u64], p: &[u64]) -> usize {
    if p.is_empty() {
        return t.len();
    }
    if p.len() > t.len() {
        return 0;
    }
    t.windows(p.len()).filter(|w| *w == p).count()
}

/// Sorted inclusive SA interval by scanning the suffix array.
pub fn sa_interval(t: &[u64], sa: &[usize], p: &[u64]) -> Option<(usize, usize)> {
    let hits: Vec<usize> = (0..sa.len()).filter(|&i| t[sa[i]..].starts_with(p)).collect();
    Some((*hits.first()?, *hits.last()?))
}

/// `(doc, tf)` for all documents containing `p`, ordered by tf desc then
/// doc asc, truncated to `k`; plus the document frequency.
pub fn topk(docs: &[Vec<u64>], p: &[u64], k: usize) -> (Vec<(usize, usize)>, usize) {
    let mut freqs: Vec<(usize, usize)> = docs
        .iter()
        .enumerate()
        .map(|(d, t)| (d, count_occurrences(t, p)))
        .filter(|&(_, tf)| tf > 0)
        .collect();
    let df = freqs.len();
    freqs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    freqs.truncate(k);
    (freqs, df)
}

pub fn docs_of(c: &Collection) -> Vec<Vec<u64>> {
    (0..c.num_docs()).map(|d| c.doc(d)).collect()
}

pub fn running_example() -> Collection {
    Collection::from_docs(&["aba", "ab"], Mode::Byte).unwrap()
}

pub fn build_all(c: &Collection) -> Vec<DocIndex> {
    Algo::ALL.iter().map(|&a| build_index(c.clone(), &BuildOptions::new(a)).unwrap()).collect()
}

/// Seeded synthetic collection.
pub fn corpus(docs: usize, avg_len: usize, sigma: usize, mode: Mode, seed: u64) -> Collection {
    let mut spec = CorpusSpec::new(docs, avg_len, sigma, 1.0, seed);
    spec.mode = mode;
    gen_collection(&spec).unwrap()
}

/// Small deterministic generator for exhaustive enumerations.
pub fn bits_of(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}
