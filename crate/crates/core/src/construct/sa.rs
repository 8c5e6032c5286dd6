//! Suffix sorting by prefix doubling (Larsson-Sadakane qsufsort).
//!
//! Two bit-compressed arrays are kept: `I`, holding suffix numbers or the
//! negated length of a run of finished groups, and `V`, the group number
//! (index of the last slot of the suffix's group) of every suffix. Unsorted
//! groups are refined by ternary quicksort on the key `V[s + h]` while `h`
//! doubles.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::intvec::{bits_for, IntVector, IntVectorReader};

/// A symbol sequence that can be scanned front to back, possibly repeatedly.
pub trait SymbolSource {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn for_each_symbol(&self, f: &mut dyn FnMut(u64)) -> Result<()>;
}

impl SymbolSource for IntVector {
    fn len(&self) -> usize {
        IntVector::len(self)
    }

    fn for_each_symbol(&self, f: &mut dyn FnMut(u64)) -> Result<()> {
        for v in self.iter() {
            f(v);
        }
        Ok(())
    }
}

impl SymbolSource for [u64] {
    fn len(&self) -> usize {
        <[u64]>::len(self)
    }

    fn for_each_symbol(&self, f: &mut dyn FnMut(u64)) -> Result<()> {
        for &v in self {
            f(v);
        }
        Ok(())
    }
}

/// An [`IntVector`] frame on disk, streamed on every scan.
#[derive(Debug, Clone)]
pub struct DiskSymbols {
    path: PathBuf,
    len: usize,
}

impl DiskSymbols {
    pub fn open(path: &Path) -> Result<Self> {
        let reader = IntVectorReader::new(std::fs::File::open(path)?)?;
        Ok(DiskSymbols { path: path.to_path_buf(), len: reader.len() })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn reader(&self) -> Result<IntVectorReader<std::io::BufReader<std::fs::File>>> {
        IntVectorReader::new(std::io::BufReader::with_capacity(1 << 16, std::fs::File::open(&self.path)?))
    }
}

impl SymbolSource for DiskSymbols {
    fn len(&self) -> usize {
        self.len
    }

    fn for_each_symbol(&self, f: &mut dyn FnMut(u64)) -> Result<()> {
        let mut r = self.reader()?;
        while let Some(v) = r.next_value()? {
            f(v);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Sort(usize, usize),
    Update(usize, usize),
}

/// Working state of the suffix sort.
#[derive(Debug)]
pub struct SuffixSorter {
    n: usize,
    h: usize,
    /// Signed entries in two's complement of width `iw`.
    i: IntVector,
    iw: u8,
    v: IntVector,
}

impl SuffixSorter {
    /// Buckets suffixes by their first symbol. The text must end with its
    /// unique smallest symbol.
    pub fn initial_groups<S: SymbolSource + ?Sized>(text: &S, sigma: u64) -> Result<Self> {
        let n = text.len();
        if n == 0 {
            return Err(Error::Empty("text"));
        }
        let iw = bits_for(n as u64) + 1;
        let vw = bits_for(n as u64 - 1);
        let mut counts: Vec<usize>;
        let dense = sigma as usize <= 4 * n + 256;
        // Sparse alphabets (a short text over a huge vocabulary) are mapped
        // to the ranks of the symbols that actually occur.
        let mut present: Vec<u64> = Vec::new();
        if !dense {
            text.for_each_symbol(&mut |c| present.push(c))?;
            present.sort_unstable();
            present.dedup();
        }
        let key = |c: u64| -> usize {
            if dense {
                c as usize
            } else {
                present.binary_search(&c).expect("symbol seen in first pass")
            }
        };
        let buckets = if dense { sigma as usize } else { present.len() };
        counts = vec![0; buckets + 1];
        let mut last = 0u64;
        let mut min = u64::MAX;
        let mut bad = None;
        text.for_each_symbol(&mut |c| {
            if c >= sigma {
                bad.get_or_insert(c);
                return;
            }
            counts[key(c) + 1] += 1;
            last = c;
            min = min.min(c);
        })?;
        if let Some(c) = bad {
            return Err(Error::SymbolRange { symbol: c, sigma });
        }
        if last != min || counts[key(last) + 1] != 1 {
            return Err(Error::InvalidArgument("text must end with its unique smallest symbol".into()));
        }
        for b in 0..buckets {
            counts[b + 1] += counts[b];
        }
        let mut i = IntVector::with_len(n, iw)?;
        let mut v = IntVector::with_len(n, vw)?;
        let mut fill = counts.clone();
        let mut pos = 0usize;
        text.for_each_symbol(&mut |c| {
            let b = key(c);
            v.set(pos, (counts[b + 1] - 1) as u64);
            i.set(fill[b], pos as u64);
            fill[b] += 1;
            pos += 1;
        })?;
        drop(fill);
        let mut sorter = SuffixSorter { n, h: 1, i, iw, v };
        for b in 0..buckets {
            if counts[b + 1] - counts[b] == 1 {
                sorter.set_i(counts[b], -1);
            }
        }
        Ok(sorter)
    }

    #[inline]
    fn get_i(&self, p: usize) -> i64 {
        let raw = self.i.get(p);
        let w = self.iw as u32;
        if raw >> (w - 1) & 1 == 1 {
            raw as i64 - (1i64 << w)
        } else {
            raw as i64
        }
    }

    #[inline]
    fn set_i(&mut self, p: usize, x: i64) {
        let mask = (1u64 << self.iw) - 1;
        self.i.set(p, x as u64 & mask);
    }

    #[inline]
    fn key(&self, p: usize) -> u64 {
        self.v.get(self.get_i(p) as usize + self.h)
    }

    #[inline]
    fn swap(&mut self, a: usize, b: usize) {
        self.i.swap(a, b);
    }

    fn update_group(&mut self, pl: usize, pm: usize) {
        let g = pm as u64;
        self.v.set(self.get_i(pl) as usize, g);
        if pl == pm {
            self.set_i(pl, -1);
        } else {
            for q in pl + 1..=pm {
                self.v.set(self.get_i(q) as usize, g);
            }
        }
    }

    fn select_sort_split(&mut self, p: usize, n: usize) {
        let mut pa = p;
        let pn = p + n - 1;
        while pa < pn {
            let mut pb = pa + 1;
            let mut f = self.key(pa);
            for pi in pa + 1..=pn {
                let v = self.key(pi);
                if v < f {
                    f = v;
                    self.swap(pi, pa);
                    pb = pa + 1;
                } else if v == f {
                    self.swap(pi, pb);
                    pb += 1;
                }
            }
            self.update_group(pa, pb - 1);
            pa = pb;
        }
        if pa == pn {
            let s = self.get_i(pa) as usize;
            self.v.set(s, pa as u64);
            self.set_i(pa, -1);
        }
    }

    fn med3(&self, a: usize, b: usize, c: usize) -> usize {
        let (ka, kb, kc) = (self.key(a), self.key(b), self.key(c));
        if ka < kb {
            if kb < kc {
                b
            } else if ka < kc {
                c
            } else {
                a
            }
        } else if kb > kc {
            b
        } else if ka > kc {
            c
        } else {
            a
        }
    }

    fn choose_pivot(&self, p: usize, n: usize) -> u64 {
        let mut pm = p + (n >> 1);
        if n > 7 {
            let mut pl = p;
            let mut pn = p + n - 1;
            if n > 40 {
                let s = n >> 3;
                pl = self.med3(pl, pl + s, pl + 2 * s);
                pm = self.med3(pm - s, pm, pm + s);
                pn = self.med3(pn - 2 * s, pn - s, pn);
            }
            pm = self.med3(pl, pm, pn);
        }
        self.key(pm)
    }

    /// Ternary split-end partition of `I[p..p+n)` by key. Subtasks run in
    /// the order left part, middle group update, right part; later groups
    /// read group numbers written by earlier ones.
    fn sort_split(&mut self, p0: usize, n0: usize, stack: &mut Vec<Task>) {
        stack.push(Task::Sort(p0, n0));
        while let Some(task) = stack.pop() {
            let (p, n) = match task {
                Task::Update(pl, pm) => {
                    self.update_group(pl, pm);
                    continue;
                }
                Task::Sort(p, n) => (p, n),
            };
            if n < 7 {
                self.select_sort_split(p, n);
                continue;
            }
            let v = self.choose_pivot(p, n);
            let (mut pa, mut pb) = (p as isize, p as isize);
            let (mut pc, mut pd) = ((p + n - 1) as isize, (p + n - 1) as isize);
            loop {
                while pb <= pc {
                    let f = self.key(pb as usize);
                    if f > v {
                        break;
                    }
                    if f == v {
                        self.swap(pa as usize, pb as usize);
                        pa += 1;
                    }
                    pb += 1;
                }
                while pc >= pb {
                    let f = self.key(pc as usize);
                    if f < v {
                        break;
                    }
                    if f == v {
                        self.swap(pc as usize, pd as usize);
                        pd -= 1;
                    }
                    pc -= 1;
                }
                if pb > pc {
                    break;
                }
                self.swap(pb as usize, pc as usize);
                pb += 1;
                pc -= 1;
            }
            let p_i = p as isize;
            let pn = (p + n) as isize;
            let s = (pa - p_i).min(pb - pa);
            for k in 0..s {
                self.swap((p_i + k) as usize, (pb - s + k) as usize);
            }
            let s = (pd - pc).min(pn - pd - 1);
            for k in 0..s {
                self.swap((pb + k) as usize, (pn - s + k) as usize);
            }
            let s = (pb - pa) as usize;
            let t = (pd - pc) as usize;
            if t > 0 {
                stack.push(Task::Sort(p + n - t, t));
            }
            stack.push(Task::Update(p + s, p + n - t - 1));
            if s > 0 {
                stack.push(Task::Sort(p, s));
            }
        }
    }

    /// Runs the doubling rounds and returns `SA` with width `⌈log2 n⌉`.
    pub fn prefix_doubling(mut self) -> IntVector {
        let n = self.n;
        let mut stack = Vec::new();
        while self.get_i(0) > -(n as i64) {
            let mut pi = 0usize;
            let mut sl: i64 = 0;
            while pi < n {
                let s = self.get_i(pi);
                if s < 0 {
                    pi += (-s) as usize;
                    sl += s;
                } else {
                    if sl != 0 {
                        self.set_i((pi as i64 + sl) as usize, sl);
                        sl = 0;
                    }
                    let pk = self.v.get(s as usize) as usize + 1;
                    self.sort_split(pi, pk - pi, &mut stack);
                    pi = pk;
                }
            }
            if sl != 0 {
                self.set_i((pi as i64 + sl) as usize, sl);
            }
            self.h *= 2;
        }
        let SuffixSorter { mut i, v, .. } = self;
        for s in 0..n {
            i.set(v.get(s) as usize, s as u64);
        }
        drop(v);
        let mut sa = IntVector::with_len(n, bits_for(n as u64 - 1)).expect("valid width");
        for k in 0..n {
            sa.set(k, i.get(k));
        }
        sa
    }
}

/// Suffix array of a text ending with its unique smallest symbol.
pub fn build_sa<S: SymbolSource + ?Sized>(text: &S, sigma: u64) -> Result<IntVector> {
    Ok(SuffixSorter::initial_groups(text, sigma)?.prefix_doubling())
}

/// Inverse permutation with the same width.
pub fn inverse(sa: &IntVector) -> IntVector {
    let mut isa = IntVector::with_len(sa.len(), sa.width()).expect("valid width");
    for (i, s) in sa.iter().enumerate() {
        isa.set(s as usize, i as u64);
    }
    isa
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_sa(t: &[u64]) -> Vec<u64> {
        let mut sa: Vec<usize> = (0..t.len()).collect();
        sa.sort_by(|&a, &b| t[a..].cmp(&t[b..]));
        sa.into_iter().map(|x| x as u64).collect()
    }

    fn sa_of(t: &[u64], sigma: u64) -> Vec<u64> {
        build_sa(t, sigma).unwrap().to_vec()
    }

    #[test]
    fn running_example() {
        let t = [2, 3, 2, 1, 2, 3, 1, 0];
        assert_eq!(sa_of(&t, 4), vec![7, 6, 3, 2, 4, 0, 5, 1]);
        let isa = inverse(&IntVector::from_slice_min_width(&sa_of(&t, 4)));
        assert_eq!(isa.to_vec(), vec![5, 7, 3, 2, 4, 6, 1, 0]);
    }

    #[test]
    fn unary_text_sorts_by_length() {
        for k in 0..50u64 {
            let mut t = vec![2u64; k as usize];
            t.push(0);
            let expected: Vec<u64> = (0..=k).rev().collect();
            assert_eq!(sa_of(&t, 3), expected);
        }
    }

    #[test]
    fn all_binary_texts_up_to_12() {
        for len in 0..=12usize {
            for mask in 0u32..(1 << len) {
                let mut t: Vec<u64> = (0..len).map(|i| 2 + (mask >> i & 1) as u64).collect();
                t.push(0);
                assert_eq!(sa_of(&t, 4), naive_sa(&t), "{t:?}");
            }
        }
    }

    #[test]
    fn random_texts_against_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for sigma in [3u64, 4, 6, 40, 258] {
            let n = 2000;
            let mut t: Vec<u64> = (0..n).map(|_| rng.random_range(1..sigma)).collect();
            t.push(0);
            assert_eq!(sa_of(&t, sigma), naive_sa(&t), "sigma {sigma}");
        }
        // Highly repetitive input exercises deep doubling.
        let mut t: Vec<u64> = (0..3000).map(|i| 2 + (i % 7 == 0) as u64).collect();
        t.push(0);
        assert_eq!(sa_of(&t, 4), naive_sa(&t));
    }

    #[test]
    fn sparse_alphabet_is_remapped() {
        let t = [900_000u64, 5, 900_000, 5, 0];
        assert_eq!(sa_of(&t, 1_000_000), naive_sa(&t));
    }

    #[test]
    fn rejects_bad_terminator() {
        assert!(build_sa(&[2u64, 3][..], 4).is_err());
        assert!(build_sa(&[0u64, 2, 0][..], 4).is_err());
        assert!(build_sa(&[2u64, 9, 0][..], 4).is_err());
        assert!(build_sa(&[][..], 4).is_err());
    }

    #[test]
    fn disk_source_matches_memory() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.iv");
        let t = IntVector::from_slice(&[2, 3, 2, 1, 2, 3, 1, 0], 8).unwrap();
        use crate::persist::Persist;
        t.save(&path).unwrap();
        let disk = DiskSymbols::open(&path).unwrap();
        assert_eq!(build_sa(&disk, 256).unwrap(), build_sa(&t, 256).unwrap());
    }

    proptest! {
        #[test]
        fn matches_naive(mut t in proptest::collection::vec(1u64..5, 0..300)) {
            t.push(0);
            prop_assert_eq!(sa_of(&t, 5), naive_sa(&t));
        }
    }
}
