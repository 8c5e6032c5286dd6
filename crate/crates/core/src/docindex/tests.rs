use super::*;
use crate::construct::Collection;
use crate::tooling::monitor::MemoryMonitor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn running(algo: Algo) -> DocIndex {
    let c = Collection::from_docs(&["aba", "ab"], Mode::Byte).unwrap();
    build_index(c, &BuildOptions::new(algo)).unwrap()
}

/// Scan-and-count top-k under the shared tie rule.
fn naive(docs: &[Vec<u64>], p: &[u64], k: usize) -> (Vec<(usize, usize)>, usize) {
    let mut freqs: Vec<(usize, usize)> = docs
        .iter()
        .enumerate()
        .map(|(d, t)| (d, if p.len() > t.len() { 0 } else { t.windows(p.len()).filter(|w| *w == p).count() }))
        .filter(|&(_, tf)| tf > 0)
        .collect();
    let df = freqs.len();
    freqs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    freqs.truncate(k);
    (freqs, df)
}

#[test]
fn running_example_queries() {
    let a = b'a' as u64;
    let b = b'b' as u64;
    for algo in Algo::ALL {
        let idx = running(algo);
        assert_eq!(idx.interval(&[a]), Some((3, 5)));
        assert_eq!(idx.df(&[a]), 2);
        assert_eq!(idx.df(&[b, b]), 0);
        let hits: Vec<(usize, usize)> = idx.topk(&[a], 2, Ranking::Frequency).iter().map(|h| (h.doc, h.tf)).collect();
        assert_eq!(hits, vec![(0, 2), (1, 1)], "{algo}");
        let one: Vec<(usize, usize)> = idx.topk(&[a], 1, Ranking::Frequency).iter().map(|h| (h.doc, h.tf)).collect();
        assert_eq!(one, vec![(0, 2)]);
        let ab: Vec<(usize, usize)> = idx.query(b"ab", 10, Ranking::Frequency).iter().map(|h| (h.doc, h.tf)).collect();
        assert_eq!(ab, vec![(0, 1), (1, 1)]);
        let tfidf = idx.topk(&[a], 2, Ranking::TfIdf);
        assert!(tfidf.iter().all(|h| h.score == 0.0));
        assert!(idx.topk(&[b, b], 3, Ranking::Frequency).is_empty());
    }
}

#[test]
fn sada_listing_trace() {
    let idx = running(Algo::Sada);
    let sada = idx.as_sada().unwrap();
    let left: Vec<(usize, usize)> = sada.distinct_docs(3, 5).iter().map(|o| (o.doc, o.index)).collect();
    // min C over [3, 5] sits at 4, so document 1 is found first.
    assert_eq!(left, vec![(1, 4), (0, 3)]);
    let right = sada.distinct_docs_rightmost(3, 5);
    let r0 = right.iter().find(|o| o.doc == 0).unwrap();
    assert_eq!(r0.index, 5);
    assert_eq!(sada.doc_isa(0).to_vec(), vec![2, 3, 1, 0]);
    assert_eq!(sada.doc_isa(1).to_vec(), vec![1, 2, 0]);
    assert_eq!(sada.doc_offset(1), 4);
    // SA[3] = 2 and SA[5] = 0 hold local ranks 1 and 2.
    assert_eq!(sada.tf(0, 2, 0), 2);
    assert_eq!(sada.doc_frequencies(3, 5), vec![(0, 2), (1, 1)]);
    assert_eq!(sada.distinct_docs(4, 4).len(), 1);
}

#[test]
fn greedy_ties_and_structure() {
    let idx = running(Algo::Greedy);
    let g = idx.as_greedy().unwrap();
    assert_eq!(g.wtd().sigma(), 3);
    assert_eq!(g.wtd().len(), 8);
    assert_eq!(g.best_first(3, 5, 10), vec![(0, 2), (1, 1)]);
    let s = running(Algo::Sort);
    assert_eq!(s.as_sort().unwrap().doc_array().to_vec(), vec![2, 1, 0, 0, 1, 0, 1, 0]);
}

fn random_docs(rng: &mut ChaCha8Rng, n_docs: usize, sigma: u8) -> Vec<Vec<u8>> {
    (0..n_docs)
        .map(|_| {
            let len = rng.random_range(1..40);
            (0..len).map(|_| b'a' + rng.random_range(0..sigma).min(rng.random_range(0..sigma))).collect()
        })
        .collect()
}

#[test]
fn random_collections_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for round in 0..6 {
        let n_docs = [3, 17, 60][round % 3];
        let sigma = if round < 3 { 3 } else { 12 };
        let raw = random_docs(&mut rng, n_docs, sigma);
        let c = Collection::from_docs(&raw, Mode::Byte).unwrap();
        let docs: Vec<Vec<u64>> = (0..n_docs).map(|d| c.doc(d)).collect();
        let all: Vec<DocIndex> = Algo::ALL.iter().map(|&a| build_index(c.clone(), &BuildOptions::new(a)).unwrap()).collect();
        for _ in 0..150 {
            let d = rng.random_range(0..n_docs);
            if docs[d].is_empty() {
                continue;
            }
            let len = rng.random_range(1..=docs[d].len().min(5));
            let start = rng.random_range(0..=docs[d].len() - len);
            let mut p = docs[d][start..start + len].to_vec();
            if rng.random_bool(0.1) {
                p.push(b'z' as u64);
            }
            for k in [1, 3, n_docs] {
                let (want, df) = naive(&docs, &p, k);
                for idx in &all {
                    let got: Vec<(usize, usize)> = idx.topk(&p, k, Ranking::Frequency).iter().map(|h| (h.doc, h.tf)).collect();
                    assert_eq!(got, want, "{} {p:?} k={k}", idx.algo());
                    assert_eq!(idx.df(&p), df);
                    for h in idx.topk(&p, k, Ranking::TfIdf) {
                        let expect = h.tf as f64 * (n_docs as f64 / df as f64).ln();
                        assert!((h.score - expect).abs() <= 1e-12 * expect.abs().max(1.0));
                    }
                }
            }
        }
    }
}

#[test]
fn word_mode_and_file_round_trip() {
    let c = Collection::parse(b"the cat sat\nthe dog\ncat cat the\n", Mode::Word, b'\n').unwrap();
    let dir = tempfile::tempdir().unwrap();
    for algo in Algo::ALL {
        let idx = build_index(c.clone(), &BuildOptions::new(algo)).unwrap();
        let path = dir.path().join(format!("{algo}.idx"));
        let tree = idx.save_with_vocab(&path).unwrap();
        assert_eq!(tree.size, std::fs::metadata(&path).unwrap().len());
        assert!(tree.is_consistent());
        let back = DocIndex::load_with_vocab(&path).unwrap();
        assert_eq!(back.header(), idx.header());
        let hits: Vec<(usize, usize)> = back.query(b"cat", 10, Ranking::Frequency).iter().map(|h| (h.doc, h.tf)).collect();
        assert_eq!(hits, vec![(2, 2), (0, 1)]);
        assert_eq!(back.query(b"the cat", 10, Ranking::Frequency).len(), 1);
        assert!(back.query(b"bird", 10, Ranking::Frequency).is_empty());
        assert_eq!(back.to_bytes().unwrap(), idx.to_bytes().unwrap());
    }
}

#[test]
fn sada_build_reports_seven_phases() {
    let c = Collection::from_docs(&["aba", "ab"], Mode::Byte).unwrap();
    let mon = MemoryMonitor::start();
    build_index(c, &BuildOptions::new(Algo::Sada)).unwrap();
    let report = mon.finish();
    assert_eq!(report.top_level_labels(), SADA_PHASES.to_vec());
    assert!(report.errors.is_empty());
}

#[test]
fn size_tree_children() {
    let idx = running(Algo::Sada);
    let tree = idx.size_tree("index").unwrap();
    let names: Vec<&str> = tree.children.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, vec!["csa_full", "border", "rminq", "rmaxq", "doc_isa"]);
    assert_eq!(tree.size, idx.to_bytes().unwrap().len() as u64);
}
