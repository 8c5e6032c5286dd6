mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use succdoc::bitvec::PlainBitVector;
use succdoc::compressed::RrrVector;
use succdoc::construct::{build_sa, Mode};
use succdoc::csa::{CsaPsi, CsaWt, SampleKind, SuffixArrayIndex};
use succdoc::intvec::IntVector;
use succdoc::persist::Persist;

fn random_text(rng: &mut ChaCha8Rng, n: usize, sigma: u64) -> Vec<u64> {
    let mut t: Vec<u64> = (0..n - 1).map(|_| 2 + rng.random_range(0..sigma - 2).min(rng.random_range(0..sigma - 2))).collect();
    t.push(0);
    t
}

#[test]
fn counts_match_scan_at_100k() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let t = random_text(&mut rng, 100_000, 8);
    let text = IntVector::from_slice_min_width(&t);
    let psi = CsaPsi::build(&text, 8, Mode::Byte, SampleKind::TextOrder, 32).unwrap();
    let wt = CsaWt::<RrrVector>::build(&text, 8, Mode::Byte, SampleKind::SuffixOrder, 64).unwrap();
    for _ in 0..400 {
        let len = rng.random_range(1..12);
        let p: Vec<u64> = if rng.random_bool(0.7) {
            let s = rng.random_range(0..t.len() - len);
            t[s..s + len].to_vec()
        } else {
            (0..len).map(|_| rng.random_range(1..9)).collect()
        };
        let want = common::count_occurrences(&t, &p);
        assert_eq!(psi.count(&p), want, "{p:?}");
        assert_eq!(wt.range(&p), psi.range(&p));
    }
}

#[test]
fn every_pattern_up_to_length_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let t = random_text(&mut rng, 2_000, 5);
    let text = IntVector::from_slice_min_width(&t);
    let sa = common::suffix_array(&t);
    let psi = CsaPsi::build(&text, 5, Mode::Byte, SampleKind::TextOrder, 4).unwrap();
    let wt = CsaWt::<PlainBitVector>::build(&text, 5, Mode::Byte, SampleKind::TextOrder, 4).unwrap();
    let mut p = Vec::new();
    fn walk(p: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        f(p);
        if p.len() == 4 {
            return;
        }
        for c in 1..5 {
            p.push(c);
            walk(p, f);
            p.pop();
        }
    }
    walk(&mut p, &mut |p| {
        let want = if p.is_empty() { Some((0, t.len() - 1)) } else { common::sa_interval(&t, &sa, p) };
        assert_eq!(psi.backward_search(p), want);
        assert_eq!(wt.backward_search(p), want);
    });
}

#[test]
fn locate_and_extract_independent_of_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    let n = 100_000;
    let t = random_text(&mut rng, n, 30);
    let text = IntVector::from_slice_min_width(&t);
    let sa = build_sa(&text, 30).unwrap();
    let probes: Vec<usize> = (0..2_000).map(|_| rng.random_range(0..n)).collect();
    for kind in [SampleKind::TextOrder, SampleKind::SuffixOrder] {
        for rate in [1, 4, 32, n] {
            let psi = CsaPsi::build(&text, 30, Mode::Byte, kind, rate).unwrap();
            let wt = CsaWt::<RrrVector>::build(&text, 30, Mode::Byte, kind, rate).unwrap();
            let checks = if rate == n { &probes[..40] } else { &probes[..] };
            for csa in [&psi as &dyn SuffixArrayIndex, &wt] {
                for &i in checks {
                    assert_eq!(csa.sa(i).unwrap() as u64, sa.get(i));
                    assert_eq!(csa.sa(csa.isa(i).unwrap()).unwrap(), i);
                }
                for &l in &checks[..20] {
                    let r = (l + 25).min(n - 1);
                    assert_eq!(csa.extract(l, r).unwrap(), t[l..=r].to_vec());
                }
            }
        }
    }
}

#[test]
fn large_word_alphabet() {
    let mut rng = ChaCha8Rng::seed_from_u64(503);
    let sigma = 50_000u64;
    let mut t: Vec<u64> = (0..30_000).map(|_| rng.random_range(2..sigma)).collect();
    t.push(0);
    let text = IntVector::from_slice_min_width(&t);
    let psi = CsaPsi::build(&text, sigma, Mode::Word, SampleKind::TextOrder, 16).unwrap();
    let wt = CsaWt::<RrrVector>::build(&text, sigma, Mode::Word, SampleKind::TextOrder, 16).unwrap();
    for _ in 0..500 {
        let s = rng.random_range(0..t.len() - 2);
        let p = &t[s..s + 2];
        assert_eq!(psi.count(p), common::count_occurrences(&t, p));
        assert_eq!(wt.range(p), psi.range(p));
    }
    assert_eq!(psi.alphabet().sigma(), sigma);
    let back = CsaPsi::from_bytes(&psi.to_bytes().unwrap()).unwrap();
    assert_eq!(back.extract(100, 200).unwrap(), t[100..=200].to_vec());
}

#[test]
fn rrr_backend_smaller_on_low_entropy_text() {
    // Near-duplicate documents: low higher-order entropy, long BWT runs.
    let mut rng = ChaCha8Rng::seed_from_u64(504);
    let base: Vec<u8> = (0..2_000).map(|_| b'a' + rng.random_range(0..20u8)).collect();
    let docs: Vec<Vec<u8>> = (0..40)
        .map(|_| {
            let mut d = base.clone();
            for _ in 0..10 {
                let i = rng.random_range(0..d.len());
                d[i] = b'a' + rng.random_range(0..20u8);
            }
            d
        })
        .collect();
    let c = succdoc::construct::Collection::from_docs(&docs, Mode::Byte).unwrap();
    let rrr = CsaWt::<RrrVector>::build(c.text(), c.sigma(), Mode::Byte, SampleKind::TextOrder, 64).unwrap();
    let plain = CsaWt::<PlainBitVector>::build(c.text(), c.sigma(), Mode::Byte, SampleKind::TextOrder, 64).unwrap();
    assert!(rrr.to_bytes().unwrap().len() < plain.to_bytes().unwrap().len());
}
