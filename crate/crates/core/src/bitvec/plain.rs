use std::io::{Read, Write};

use super::{select_by_rank, BackendKind, BitBackend, BitRank, BitVector, RankSupport, SelectSupport};
use crate::error::{Error, Result};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCPLBV";

/// Uncompressed bitvector bundled with its rank directory and optional
/// select samples.
///
/// Without select samples `select1`/`select0` fall back to a binary search
/// over rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainBitVector {
    bits: BitVector,
    rank: RankSupport,
    select1: Option<SelectSupport>,
    select0: Option<SelectSupport>,
}

impl PlainBitVector {
    /// Rank support only.
    pub fn rank_only(bits: BitVector) -> Self {
        let rank = RankSupport::new(&bits);
        PlainBitVector { bits, rank, select1: None, select0: None }
    }

    /// Rank plus select over ones.
    pub fn new(bits: BitVector) -> Self {
        let mut bv = Self::rank_only(bits);
        bv.select1 = Some(SelectSupport::new(&bv.bits, true));
        bv
    }

    /// Rank plus select over ones and zeros.
    pub fn with_select0(bits: BitVector) -> Self {
        let mut bv = Self::new(bits);
        bv.select0 = Some(SelectSupport::new(&bv.bits, false));
        bv
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn rank_support(&self) -> &RankSupport {
        &self.rank
    }

    pub fn has_select(&self) -> bool {
        self.select1.is_some()
    }

    /// Bits of the rank directory per payload bit.
    pub fn rank_overhead(&self) -> Result<f64> {
        let rank_bytes = self.rank.size_tree("rank")?.size;
        Ok((rank_bytes * 8) as f64 / self.bits.len().max(1) as f64)
    }
}

impl BitRank for PlainBitVector {
    fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    fn access(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.bits.len(), "rank position {i} beyond length {}", self.bits.len());
        self.rank.rank1(&self.bits, i)
    }

    fn select1(&self, j: usize) -> Option<usize> {
        match &self.select1 {
            Some(s) => s.select(&self.bits, &self.rank, j),
            None => select_by_rank(self.len(), j, |i| self.rank1(i)),
        }
    }
}

impl BitBackend for PlainBitVector {
    const KIND: BackendKind = BackendKind::Plain;

    fn from_bitvector(bits: &BitVector) -> Self {
        Self::rank_only(bits.clone())
    }

    fn select0(&self, j: usize) -> Option<usize> {
        match &self.select0 {
            Some(s) => s.select(&self.bits, &self.rank, j),
            None => select_by_rank(self.len(), j, |i| self.rank0(i)),
        }
    }
}

impl Persist for PlainBitVector {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        let flags = self.select1.is_some() as u8 | ((self.select0.is_some() as u8) << 1);
        persist::write_u8(w, flags)?;
        node.child(self.bits.write_to(w, "bits")?);
        node.child(self.rank.write_to(w, "rank")?);
        if let Some(s) = &self.select1 {
            node.child(s.write_to(w, "select1")?);
        }
        if let Some(s) = &self.select0 {
            node.child(s.write_to(w, "select0")?);
        }
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let flags = persist::read_u8(r)?;
        if flags > 3 {
            return Err(Error::Format(format!("bad bitvector flags {flags}")));
        }
        let bits = BitVector::read_from(r)?;
        let rank = RankSupport::read_from(r)?;
        let select1 = if flags & 1 != 0 { Some(SelectSupport::read_from(r)?) } else { None };
        let select0 = if flags & 2 != 0 { Some(SelectSupport::read_from(r)?) } else { None };
        Ok(PlainBitVector { bits, rank, select1, select0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_rank(bits: &[bool], i: usize) -> usize {
        bits[..i].iter().filter(|&&b| b).count()
    }

    fn naive_select(bits: &[bool], bit: bool, j: usize) -> Option<usize> {
        bits.iter().enumerate().filter(|(_, &b)| b == bit).nth(j.checked_sub(1)?).map(|(p, _)| p)
    }

    #[test]
    fn small_example() {
        let bv = PlainBitVector::new(BitVector::from_str_bits("10110").unwrap());
        assert_eq!(bv.rank1(0), 0);
        assert_eq!(bv.rank1(5), 3);
        assert_eq!(bv.select1(1), Some(0));
        assert_eq!(bv.select1(3), Some(3));
        assert!(bv.try_rank1(6).is_err());
        assert!(bv.try_select1(0).is_err());
        assert!(bv.try_select1(4).is_err());
        assert!(bv.try_access(5).is_err());
    }

    #[test]
    fn all_ones_select_is_identity() {
        let bv = PlainBitVector::new(BitVector::from_bools(&[true; 100]));
        for j in 1..=100 {
            assert_eq!(bv.select1(j), Some(j - 1));
        }
    }

    #[test]
    fn exhaustive_small_vectors() {
        for n in 0..=12usize {
            for mask in 0u32..(1 << n) {
                let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let bv = PlainBitVector::with_select0(BitVector::from_bools(&bits));
                for i in 0..=n {
                    assert_eq!(bv.rank1(i), naive_rank(&bits, i));
                }
                for j in 0..=n + 1 {
                    assert_eq!(bv.select1(j), naive_select(&bits, true, j));
                    assert_eq!(bv.select0(j), naive_select(&bits, false, j));
                }
            }
        }
    }

    #[test]
    fn random_large_vector_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for density in [0.001, 0.05, 0.5, 0.97] {
            let n = 100_000;
            let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(density)).collect();
            let bv = PlainBitVector::with_select0(BitVector::from_bools(&bits));
            let mut prefix = vec![0usize; n + 1];
            for i in 0..n {
                prefix[i + 1] = prefix[i] + bits[i] as usize;
            }
            let ones: Vec<usize> = (0..n).filter(|&i| bits[i]).collect();
            let zeros: Vec<usize> = (0..n).filter(|&i| !bits[i]).collect();
            for _ in 0..10_000 {
                let i = rng.random_range(0..=n);
                assert_eq!(bv.rank1(i), prefix[i]);
            }
            for (j, &p) in ones.iter().enumerate() {
                assert_eq!(bv.select1(j + 1), Some(p));
            }
            for (j, &p) in zeros.iter().enumerate() {
                assert_eq!(bv.select0(j + 1), Some(p));
            }
            let rank_only = PlainBitVector::rank_only(BitVector::from_bools(&bits));
            for _ in 0..200 {
                if ones.is_empty() {
                    break;
                }
                let j = rng.random_range(1..=ones.len());
                assert_eq!(rank_only.select1(j), Some(ones[j - 1]));
            }
        }
    }

    #[test]
    fn rank_overhead_within_budget() {
        for n in [1usize << 16, 1_000_000] {
            let bv = PlainBitVector::rank_only(BitVector::new(n));
            assert!(bv.rank_overhead().unwrap() <= 0.08, "n = {n}");
        }
    }

    #[test]
    fn persist_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let bits: Vec<bool> = (0..5000).map(|_| rng.random_bool(0.3)).collect();
        let bv = PlainBitVector::with_select0(BitVector::from_bools(&bits));
        let bytes = bv.to_bytes().unwrap();
        let back = PlainBitVector::from_bytes(&bytes).unwrap();
        assert_eq!(back, bv);
        assert_eq!(bv.size_tree("bv").unwrap().size, bytes.len() as u64);
    }

    proptest! {
        #[test]
        fn rank_select_identities(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
            let bv = PlainBitVector::new(BitVector::from_bools(&bits));
            let n = bits.len();
            prop_assert_eq!(bv.rank1(0), 0);
            for i in 0..n {
                prop_assert_eq!(bv.rank1(i + 1) - bv.rank1(i), bits[i] as usize);
                if bits[i] {
                    let r = bv.rank1(i);
                    prop_assert_eq!(bv.select1(r + 1), Some(i));
                }
            }
        }
    }
}
