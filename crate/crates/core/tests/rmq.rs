mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use succdoc::persist::Persist;
use succdoc::rmq::RmqSct;

#[test]
fn every_array_up_to_nine_over_three_values() {
    for n in 1..=9usize {
        for code in 0..3u64.pow(n as u32) {
            let mut c = code;
            let a: Vec<i64> = (0..n)
                .map(|_| {
                    let x = (c % 3) as i64;
                    c /= 3;
                    x
                })
                .collect();
            let rmq = RmqSct::new_min(&a).unwrap();
            for l in 0..n {
                for r in l..n {
                    assert_eq!(rmq.query(l, r).unwrap(), common::rmq_min(&a, l, r), "{a:?} [{l},{r}]");
                }
            }
        }
    }
}

#[test]
fn random_arrays_at_100k() {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    for range in [3i64, 1000, i64::MAX / 4] {
        let a: Vec<i64> = (0..100_000).map(|_| rng.random_range(0..range)).collect();
        let rmq = RmqSct::new_min(&a).unwrap();
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        let max = RmqSct::new_max(&a).unwrap();
        for q in 0..10_000 {
            let l = rng.random_range(0..a.len());
            let span = if q % 2 == 0 { 200 } else { a.len() };
            let r = rng.random_range(l..(l + span).min(a.len()));
            assert_eq!(rmq.query(l, r).unwrap(), common::rmq_min(&a, l, r));
            assert_eq!(max.query(l, r).unwrap(), common::rmq_min(&neg, l, r));
        }
    }
}

#[test]
fn space_at_one_million() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let a: Vec<i64> = (0..1_000_000).map(|_| rng.random_range(0..1_000_000)).collect();
    let rmq = RmqSct::new_min(&a).unwrap();
    let bytes = rmq.to_bytes().unwrap();
    assert!(bytes.len() as f64 * 8.0 / a.len() as f64 <= 3.2);
    assert_eq!(RmqSct::from_bytes(&bytes).unwrap(), rmq);
    assert!(RmqSct::from_bytes(&bytes[..bytes.len() - 1]).is_err());
}

proptest! {
    #[test]
    fn matches_scan(a in proptest::collection::vec(-5i64..5, 1..400), qs in proptest::collection::vec((0usize..400, 0usize..400), 1..50)) {
        let rmq = RmqSct::new_min(&a).unwrap();
        for (x, y) in qs {
            let (l, r) = (x.min(y) % a.len(), x.max(y) % a.len());
            let (l, r) = (l.min(r), l.max(r));
            prop_assert_eq!(rmq.query(l, r).unwrap(), common::rmq_min(&a, l, r));
        }
    }
}
