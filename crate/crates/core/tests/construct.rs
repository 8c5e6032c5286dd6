mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use succdoc::bitvec::PlainBitVector;
use succdoc::construct::*;
use succdoc::intvec::IntVector;
use succdoc::persist::Persist;

fn to_usize(v: &IntVector) -> Vec<usize> {
    v.iter().map(|x| x as usize).collect()
}

#[test]
fn running_example_arrays() {
    let c = common::running_example();
    let t = c.text();
    assert_eq!(t.to_vec(), vec![97, 98, 97, 1, 97, 98, 1, 0]);
    assert_eq!(c.border().to_string(), "00010010");
    let sa = build_sa(t, c.sigma()).unwrap();
    assert_eq!(to_usize(&sa), vec![7, 6, 3, 2, 4, 0, 5, 1]);
    assert_eq!(to_usize(&inverse(&sa)), vec![5, 7, 3, 2, 4, 6, 1, 0]);
    assert_eq!(to_usize(&psi_from_sa(&sa)), vec![5, 0, 4, 2, 6, 7, 1, 3]);
    let l = bwt(t, &sa);
    // #bab#$aa
    assert_eq!(l.to_vec(), vec![1, 98, 97, 98, 1, 0, 97, 97]);
    let border = PlainBitVector::new(c.border());
    let d = doc_array(&sa, &border).unwrap();
    assert_eq!(d.to_vec(), vec![2, 1, 0, 0, 1, 0, 1, 0]);
    let prev: Vec<i64> = prev_occurrence(&d, 2).iter().map(|x| x as i64 - 1).collect();
    assert_eq!(prev, vec![-1, -1, -1, 2, 1, 3, 4, 5]);
    assert_eq!(next_occurrence(&d, 2).to_vec(), vec![8, 4, 3, 5, 6, 7, 8, 8]);
    let isas = doc_isas(t, c.doc_lens(), c.sigma()).unwrap();
    assert_eq!(isas[0].to_vec(), vec![2, 3, 1, 0]);
    assert_eq!(isas[1].to_vec(), vec![1, 2, 0]);
}

#[test]
fn every_binary_text_up_to_12() {
    for n in 1..=12usize {
        for mask in 0..1u64 << (n - 1) {
            let mut t: Vec<u64> = (0..n - 1).map(|i| 1 + (mask >> i & 1)).collect();
            t.push(0);
            let sa = build_sa(t.as_slice(), 3).unwrap();
            let want = common::suffix_array(&t);
            assert_eq!(to_usize(&sa), want, "{t:?}");
            let l = bwt(&IntVector::from_slice_min_width(&t), &sa);
            let want_bwt = common::bwt(&t, &want);
            assert_eq!(l.to_vec(), want_bwt);
            assert_eq!(to_usize(&psi_from_bwt(&l, 3).unwrap()), common::psi(&want));
        }
    }
}

#[test]
fn random_texts_against_sorting() {
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    for (n, sigma) in [(100_000usize, 4u64), (30_000, 256), (20_000, 70_000), (5_000, 2)] {
        let mut t: Vec<u64> = (0..n - 1).map(|_| rng.random_range(1..sigma)).collect();
        t.push(0);
        let sa = build_sa(t.as_slice(), sigma).unwrap();
        assert_eq!(to_usize(&sa), common::suffix_array(&t));
    }
    // Highly repetitive input exercises deep doubling.
    let mut t: Vec<u64> = (0..50_000).map(|i| 2 + (i % 7 == 0) as u64).collect();
    t.push(0);
    assert_eq!(to_usize(&build_sa(t.as_slice(), 4).unwrap()), common::suffix_array(&t));
}

#[test]
fn streaming_matches_in_memory() {
    let c = common::corpus(40, 200, 16, Mode::Byte, 401);
    let dir = tempfile::tempdir().unwrap();
    let (tp, sp, bp) = (dir.path().join("t"), dir.path().join("sa"), dir.path().join("bwt"));
    c.text().save(&tp).unwrap();
    let sorter = SuffixSorter::initial_groups(&DiskSymbols::open(&tp).unwrap(), c.sigma()).unwrap();
    let sa = sorter.prefix_doubling();
    assert_eq!(sa, build_sa(c.text(), c.sigma()).unwrap());
    sa.save(&sp).unwrap();
    bwt_streaming(c.text(), &sp, &bp).unwrap();
    let on_disk = IntVector::load(&bp).unwrap();
    assert_eq!(on_disk, bwt(c.text(), &sa));
    assert_eq!(psi_from_bwt_file(&bp, c.sigma()).unwrap(), psi_from_sa(&sa));
    let border = PlainBitVector::new(c.border());
    assert_eq!(doc_array_streaming(&sp, &border).unwrap(), doc_array(&sa, &border).unwrap());
    let bytes = std::fs::read(&sp).unwrap();
    std::fs::write(&sp, &bytes[..bytes.len() / 2]).unwrap();
    assert!(doc_array_streaming(&sp, &border).is_err());
    assert!(bwt_streaming(c.text(), &sp, &bp).is_err());
}

#[test]
fn document_array_and_occurrence_links() {
    let c = common::corpus(30, 20, 4, Mode::Byte, 402);
    let t = c.text().to_vec();
    let sa = common::suffix_array(&t);
    let starts = c.doc_starts();
    let border = PlainBitVector::new(c.border());
    let d = doc_array(&IntVector::from_slice_min_width(&sa.iter().map(|&x| x as u64).collect::<Vec<_>>()), &border).unwrap();
    for (i, &s) in sa.iter().enumerate() {
        let want = if s == t.len() - 1 { c.num_docs() } else { starts.partition_point(|&x| x <= s) - 1 };
        assert_eq!(d.get(i) as usize, want);
    }
    let prev = prev_occurrence(&d, c.num_docs());
    let next = next_occurrence(&d, c.num_docs());
    let dv = d.to_vec();
    for i in 0..dv.len() {
        let p = (0..i).rev().find(|&j| dv[j] == dv[i]).map_or(0, |j| j + 1);
        assert_eq!(prev.get(i) as usize, p);
        let q = (i + 1..dv.len()).find(|&j| dv[j] == dv[i]).unwrap_or(dv.len());
        assert_eq!(next.get(i) as usize, q);
    }
}

#[test]
fn collection_parsing_rules() {
    let c = Collection::parse(b"ab\ncd\n", Mode::Byte, b'\n').unwrap();
    assert_eq!(c.num_docs(), 2);
    assert_eq!(c.len(), 2 + 2 + 2 + 1);
    let c = Collection::parse(b"ab\n\ncd", Mode::Byte, b'\n').unwrap();
    assert_eq!(c.doc_lens(), &[2, 0, 2]);
    let c = Collection::parse(b"x|y", Mode::Byte, b'|').unwrap();
    assert_eq!(c.num_docs(), 2);
    assert!(matches!(Collection::parse(b"a\x01b", Mode::Byte, b'\n'), Err(succdoc::Error::ReservedSymbol(1))));
    assert!(Collection::parse(b"", Mode::Byte, b'\n').is_err());
    let w = Collection::parse("zeta alpha\nalpha  beta\n".as_bytes(), Mode::Word, b'\n').unwrap();
    let v = w.vocab().unwrap();
    assert_eq!((v.id("alpha"), v.id("beta"), v.id("zeta")), (Some(2), Some(3), Some(4)));
    assert_eq!(w.doc(1), vec![2, 3]);
    assert_eq!(w.map_pattern(b"alpha beta"), Some(vec![2, 3]));
    assert_eq!(w.map_pattern(b"gamma"), None);
    let dir = tempfile::tempdir().unwrap();
    let vp = dir.path().join("v");
    v.save(&vp).unwrap();
    assert_eq!(std::fs::read_to_string(&vp).unwrap(), "alpha\t2\nbeta\t3\nzeta\t4\n");
    assert_eq!(&Vocabulary::load(&vp).unwrap(), v);
}

proptest! {
    #[test]
    fn suffix_array_is_sorted_permutation(body in proptest::collection::vec(1u64..6, 0..400)) {
        let mut t = body;
        t.push(0);
        let sa = to_usize(&build_sa(t.as_slice(), 6).unwrap());
        prop_assert_eq!(&sa, &common::suffix_array(&t));
        let isa = to_usize(&inverse(&build_sa(t.as_slice(), 6).unwrap()));
        for (i, &s) in sa.iter().enumerate() {
            prop_assert_eq!(isa[s], i);
        }
    }
}
