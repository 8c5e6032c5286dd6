//! Succinct range-minimum queries.
//!
//! The array is encoded as the balanced-parentheses sequence of its
//! super-Cartesian tree: scanning left to right, every element first closes
//! `)` each stacked element strictly greater than itself and then opens `(`.
//! Equal values stay on the stack, so the leftmost minimum wins. With `E(p)`
//! the excess after position `p` and `P(i)` the position of the `i`-th open:
//!
//! * if `min E over (P(l), P(r)] >= E(P(l))` the answer is `l`;
//! * otherwise the rightmost position `q` attaining the minimum is the close
//!   just before `P(m)` for the answer `m`, so `m` is the number of opens in
//!   `[0, q]`.
//!
//! Minima come from a range min-max tree: per 64-bit block the minimum
//! excess relative to the block start, then 64-ary levels of absolute minima.

use std::io::{Read, Write};

use crate::bitvec::{BitRank, BitVector, PlainBitVector};
use crate::error::{out_of_range, Error, Result};
use crate::intvec::{bits_for, IntVector};
use crate::persist::{self, CountingWriter, NodeBuilder, Persist};
use crate::tooling::size::SizeTree;

const MAGIC: persist::Magic = *b"SUCCRMQS";
const BLOCK: usize = 64;
const FANOUT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmqSct {
    n: usize,
    bp: PlainBitVector,
    /// Per block: minimum relative excess plus 64.
    block_min: IntVector,
    /// Level `k` holds absolute minima over `64^(k+1)` blocks.
    levels: Vec<IntVector>,
}

impl RmqSct {
    /// Index of the leftmost minimum in ranges of `values`.
    pub fn new_min(values: &[i64]) -> Result<Self> {
        Self::build(values.len(), |i| values[i])
    }

    /// Index of the leftmost maximum, by negating the values.
    pub fn new_max(values: &[i64]) -> Result<Self> {
        Self::build(values.len(), |i| -values[i])
    }

    /// Builds from `n` values given by `value(i)`; the values are not kept.
    pub fn build(n: usize, value: impl Fn(usize) -> i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("range minimum array"));
        }
        let mut bits = BitVector::new(2 * n);
        let mut stack = IntVector::with_capacity(64, bits_for(n as u64))?;
        let mut pos = 0usize;
        for i in 0..n {
            let v = value(i);
            while let Some(top) = stack.last() {
                if value(top as usize) > v {
                    stack.pop();
                    pos += 1;
                } else {
                    break;
                }
            }
            bits.set(pos, true);
            pos += 1;
            stack.push(i as u64);
        }
        drop(stack);
        let len = bits.len();
        let blocks = len.div_ceil(BLOCK);
        let mut block_min = IntVector::with_len(blocks, 8)?;
        let mut abs_min = IntVector::with_len(blocks, bits_for(n as u64))?;
        let mut excess = 0i64;
        for b in 0..blocks {
            let base = excess;
            let mut m = i64::MAX;
            for p in b * BLOCK..((b + 1) * BLOCK).min(len) {
                excess += if bits.get(p) { 1 } else { -1 };
                m = m.min(excess);
            }
            block_min.set(b, (m - base + 64) as u64);
            abs_min.set(b, m as u64);
        }
        let mut levels = Vec::new();
        let mut below = abs_min;
        while below.len() > 1 {
            let up_len = below.len().div_ceil(FANOUT);
            let mut up = IntVector::with_len(up_len, below.width())?;
            for j in 0..up_len {
                let m = (j * FANOUT..((j + 1) * FANOUT).min(below.len())).map(|k| below.get(k)).min().unwrap();
                up.set(j, m);
            }
            levels.push(up);
            below = levels.last().unwrap().clone();
        }
        Ok(RmqSct { n, bp: PlainBitVector::new(bits), block_min, levels })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bp(&self) -> &BitVector {
        self.bp.bits()
    }

    /// Excess after position `p`.
    #[inline]
    fn excess(&self, p: usize) -> i64 {
        2 * self.bp.rank1(p + 1) as i64 - (p as i64 + 1)
    }

    /// Absolute minimum excess of block `b`.
    #[inline]
    fn block_abs(&self, b: usize) -> i64 {
        let before = if b == 0 { 0 } else { self.excess(b * BLOCK - 1) };
        before + self.block_min.get(b) as i64 - 64
    }

    /// Value of node `j` at tree level `lvl` (0 = blocks).
    #[inline]
    fn node(&self, lvl: usize, j: usize) -> i64 {
        if lvl == 0 {
            self.block_abs(j)
        } else {
            self.levels[lvl - 1].get(j) as i64
        }
    }

    /// Minimum excess and its rightmost position within `[a, b]` of one block.
    fn scan(&self, a: usize, b: usize) -> (i64, usize) {
        let mut e = if a == 0 { 0 } else { self.excess(a - 1) };
        let (mut m, mut at) = (i64::MAX, a);
        let bits = self.bp.bits();
        for p in a..=b {
            e += if bits.get(p) { 1 } else { -1 };
            if e <= m {
                m = e;
                at = p;
            }
        }
        (m, at)
    }

    /// Minimum over nodes `[x, y]` of level `lvl`.
    fn range_min(&self, lvl: usize, x: usize, y: usize) -> i64 {
        if y < x {
            return i64::MAX;
        }
        let x1 = x.div_ceil(FANOUT);
        let y1 = (y + 1) / FANOUT;
        if lvl == self.levels.len() || x1 >= y1 {
            return (x..=y).map(|j| self.node(lvl, j)).min().unwrap();
        }
        let left = (x..x1 * FANOUT).map(|j| self.node(lvl, j)).min().unwrap_or(i64::MAX);
        let right = (y1 * FANOUT..=y).map(|j| self.node(lvl, j)).min().unwrap_or(i64::MAX);
        left.min(right).min(self.range_min(lvl + 1, x1, y1 - 1))
    }

    /// Rightmost node in `[x, y]` of level `lvl` whose value is `target`,
    /// where `target` is at most the range minimum.
    fn rightmost(&self, lvl: usize, x: usize, y: usize, target: i64) -> Option<usize> {
        if y < x {
            return None;
        }
        let x1 = x.div_ceil(FANOUT);
        let y1 = (y + 1) / FANOUT;
        if lvl == self.levels.len() || x1 >= y1 {
            return (x..=y).rev().find(|&j| self.node(lvl, j) == target);
        }
        if let Some(j) = (y1 * FANOUT..=y).rev().find(|&j| self.node(lvl, j) == target) {
            return Some(j);
        }
        if let Some(up) = self.rightmost(lvl + 1, x1, y1 - 1, target) {
            let lo = up * FANOUT;
            return (lo..lo + FANOUT).rev().find(|&j| self.node(lvl, j) == target);
        }
        (x..x1 * FANOUT).rev().find(|&j| self.node(lvl, j) == target)
    }

    /// Minimum excess over BP positions `[a, b]` and the rightmost position
    /// attaining it.
    fn min_excess(&self, a: usize, b: usize) -> (i64, usize) {
        let (ba, bb) = (a / BLOCK, b / BLOCK);
        if ba == bb {
            return self.scan(a, b);
        }
        let left = self.scan(a, ba * BLOCK + BLOCK - 1);
        let right = self.scan(bb * BLOCK, b);
        let mid = self.range_min(0, ba + 1, bb - 1);
        let m = left.0.min(right.0).min(mid);
        if right.0 == m {
            return right;
        }
        if mid == m {
            let blk = self.rightmost(0, ba + 1, bb - 1, m).expect("minimum block exists");
            return self.scan(blk * BLOCK, blk * BLOCK + BLOCK - 1);
        }
        left
    }

    /// Index of the leftmost minimum in `[l, r]`.
    pub fn query(&self, l: usize, r: usize) -> Result<usize> {
        if l > r || r >= self.n {
            return Err(out_of_range(r.max(l), self.n));
        }
        if l == r {
            return Ok(l);
        }
        let pl = self.bp.select1(l + 1).expect("open exists");
        let pr = self.bp.select1(r + 1).expect("open exists");
        let dl = self.excess(pl);
        let (m, q) = self.min_excess(pl + 1, pr);
        if m >= dl {
            Ok(l)
        } else {
            Ok(self.bp.rank1(q + 1))
        }
    }
}

impl Persist for RmqSct {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let mut node = NodeBuilder::open(name, w);
        persist::write_header(w, &MAGIC)?;
        persist::write_u64(w, self.n as u64)?;
        persist::write_u64(w, self.levels.len() as u64)?;
        node.child(self.bp.write_to(w, "bp")?);
        node.child(self.block_min.write_to(w, "block_min")?);
        for (k, lvl) in self.levels.iter().enumerate() {
            node.child(lvl.write_to(w, &format!("level_{}", k + 1))?);
        }
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        persist::read_header(r, &MAGIC)?;
        let n = persist::read_usize(r)?;
        let depth = persist::read_usize(r)?;
        if depth > 64 {
            return Err(Error::Format("implausible range min-max tree depth".into()));
        }
        let bp = PlainBitVector::read_from(r)?;
        let block_min = IntVector::read_from(r)?;
        let levels = (0..depth).map(|_| IntVector::read_from(r)).collect::<Result<Vec<_>>>()?;
        if bp.len() != 2 * n || block_min.len() != bp.len().div_ceil(BLOCK) || !bp.has_select() {
            return Err(Error::Format("inconsistent range minimum structure".into()));
        }
        Ok(RmqSct { n, bp, block_min, levels })
    }
}

/// Linear-scan reference answers.
#[derive(Debug, Clone)]
pub struct RmqOracle {
    values: Vec<i64>,
}

impl RmqOracle {
    pub fn new(values: &[i64]) -> Self {
        RmqOracle { values: values.to_vec() }
    }

    pub fn min(&self, l: usize, r: usize) -> usize {
        (l..=r).fold(l, |best, i| if self.values[i] < self.values[best] { i } else { best })
    }

    pub fn max(&self, l: usize, r: usize) -> usize {
        (l..=r).fold(l, |best, i| if self.values[i] > self.values[best] { i } else { best })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const C: [i64; 8] = [-1, -1, -1, 2, 1, 3, 4, 5];

    #[test]
    fn running_example() {
        let rmq = RmqSct::new_min(&C).unwrap();
        assert_eq!(rmq.query(3, 5).unwrap(), 4);
        let o = RmqOracle::new(&C);
        for l in 0..8 {
            assert_eq!(rmq.query(l, l).unwrap(), l);
            for r in l..8 {
                assert_eq!(rmq.query(l, r).unwrap(), o.min(l, r));
            }
        }
        let c2 = [8i64, 4, 3, 5, 6, 7, 8, 8];
        let rmax = RmqSct::new_max(&c2).unwrap();
        let o = RmqOracle::new(&c2);
        for l in 0..8 {
            for r in l..8 {
                assert_eq!(rmax.query(l, r).unwrap(), o.max(l, r));
            }
        }
        assert!(rmq.query(5, 3).is_err());
        assert!(rmq.query(0, 8).is_err());
        assert!(RmqSct::new_min(&[]).is_err());
    }

    #[test]
    fn sorted_and_constant_arrays() {
        let inc: Vec<i64> = (0..300).collect();
        let rmq = RmqSct::new_min(&inc).unwrap();
        let konst = RmqSct::new_max(&[7; 300]).unwrap();
        for l in (0..300).step_by(7) {
            for r in (l..300).step_by(5) {
                assert_eq!(rmq.query(l, r).unwrap(), l);
                assert_eq!(konst.query(l, r).unwrap(), l);
            }
        }
    }

    #[test]
    fn exhaustive_small_arrays() {
        for n in 1..=9u32 {
            for code in 0..3u32.pow(n) {
                let vals: Vec<i64> = (0..n).map(|k| (code / 3u32.pow(k) % 3) as i64).collect();
                let rmq = RmqSct::new_min(&vals).unwrap();
                let o = RmqOracle::new(&vals);
                let n = n as usize;
                for l in 0..n {
                    for r in l..n {
                        assert_eq!(rmq.query(l, r).unwrap(), o.min(l, r), "{vals:?} [{l},{r}]");
                    }
                }
            }
        }
    }

    #[test]
    fn random_large_against_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        for spread in [3i64, 1000, 1 << 40] {
            let vals: Vec<i64> = (0..n).map(|_| rng.random_range(0..spread)).collect();
            let rmq = RmqSct::new_min(&vals).unwrap();
            let rmax = RmqSct::new_max(&vals).unwrap();
            let o = RmqOracle::new(&vals);
            for q in 0..20_000 {
                let l = rng.random_range(0..n);
                let span = if q % 2 == 0 { 200 } else { n - l };
                let r = rng.random_range(l..(l + span).min(n));
                assert_eq!(rmq.query(l, r).unwrap(), o.min(l, r));
                assert_eq!(rmax.query(l, r).unwrap(), o.max(l, r));
            }
        }
    }

    #[test]
    fn size_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 100_000;
        let vals: Vec<i64> = (0..n).map(|_| rng.random_range(0..1_000_000)).collect();
        let rmq = RmqSct::new_min(&vals).unwrap();
        let bytes = rmq.to_bytes().unwrap();
        let bits_per = (bytes.len() * 8) as f64 / n as f64;
        assert!(bits_per <= 3.2, "{bits_per}");
        let back = RmqSct::from_bytes(&bytes).unwrap();
        assert_eq!(back, rmq);
        let bp = rmq.bp();
        let (mut e, mut min) = (0i64, 0i64);
        for b in bp.iter() {
            e += if b { 1 } else { -1 };
            min = min.min(e);
        }
        assert_eq!((e, min), (0, 0));
    }
}
