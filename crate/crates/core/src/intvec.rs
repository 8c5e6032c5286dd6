//! Fixed-width bit-packed integer vectors.
//!
//! Element `i` of a vector with width `w` occupies bits `[i*w, (i+1)*w)` of
//! the little-endian word payload. The on-disk frame is
//!
//! ```text
//! magic (8) | version (1) | width (1) | len (8, LE) | payload words (LE)
//! ```
//!
//! with the payload padded to whole 64-bit words.

use std::fmt;
use std::io::{Read, Write};

use crate::error::{out_of_range, Error, Result};
use crate::persist::{self, CountingWriter, Magic, NodeBuilder, Persist};
use crate::tooling::monitor::TrackedVec;
use crate::tooling::size::SizeTree;

pub const INTVEC_MAGIC: Magic = *b"SUCCIVEC";

/// Header bytes of an [`IntVector`] frame.
pub const INTVEC_HEADER_BYTES: u64 = 8 + 1 + 1 + 8;

#[inline]
fn mask(width: u8) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Minimal number of bits to represent `max_value` (at least 1).
pub fn bits_for(max_value: u64) -> u8 {
    (64 - max_value.leading_zeros()).max(1) as u8
}

/// `⌈log2 n⌉` for `n ≥ 1`, clamped to at least 1.
pub fn ceil_log2(n: u64) -> u8 {
    if n <= 2 {
        1
    } else {
        (64 - (n - 1).leading_zeros()) as u8
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntVector {
    width: u8,
    len: usize,
    words: TrackedVec<u64>,
}

impl IntVector {
    pub fn new(width: u8) -> Result<Self> {
        Self::with_len(0, width)
    }

    /// Zero-filled vector of `len` elements.
    pub fn with_len(len: usize, width: u8) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(Error::InvalidWidth(width));
        }
        let words = (len * width as usize).div_ceil(64);
        Ok(IntVector { width, len, words: TrackedVec::filled(0, words) })
    }

    pub fn with_capacity(cap: usize, width: u8) -> Result<Self> {
        let mut v = Self::new(width)?;
        v.words = TrackedVec::with_capacity((cap * width as usize).div_ceil(64));
        Ok(v)
    }

    pub fn from_slice(values: &[u64], width: u8) -> Result<Self> {
        let mut v = Self::with_len(values.len(), width)?;
        for (i, &x) in values.iter().enumerate() {
            v.try_set(i, x)?;
        }
        Ok(v)
    }

    /// Packs `values` with the smallest width that holds the maximum.
    pub fn from_slice_min_width(values: &[u64]) -> Self {
        let width = bits_for(values.iter().copied().max().unwrap_or(0));
        Self::from_slice(values, width).expect("width fits maximum")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn bit_len(&self) -> usize {
        self.len * self.width as usize
    }

    /// Element `i`. Panics when `i >= len`.
    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.get_unchecked_bounds(i)
    }

    #[inline]
    fn get_unchecked_bounds(&self, i: usize) -> u64 {
        let w = self.width as usize;
        let pos = i * w;
        let (word, off) = (pos / 64, pos % 64);
        let lo = self.words[word] >> off;
        if off + w <= 64 {
            lo & mask(self.width)
        } else {
            (lo | (self.words[word + 1] << (64 - off))) & mask(self.width)
        }
    }

    pub fn try_get(&self, i: usize) -> Result<u64> {
        if i >= self.len {
            return Err(out_of_range(i, self.len));
        }
        Ok(self.get_unchecked_bounds(i))
    }

    /// Stores `value` at `i`. Panics when out of range or too wide.
    #[inline]
    pub fn set(&mut self, i: usize, value: u64) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        assert!(value <= mask(self.width), "value {value} exceeds width {}", self.width);
        self.set_raw(i, value);
    }

    #[inline]
    fn set_raw(&mut self, i: usize, value: u64) {
        let w = self.width as usize;
        let m = mask(self.width);
        let pos = i * w;
        let (word, off) = (pos / 64, pos % 64);
        self.words[word] = (self.words[word] & !(m << off)) | (value << off);
        if off + w > 64 {
            let hi = off + w - 64;
            let hm = (1u64 << hi) - 1;
            self.words[word + 1] = (self.words[word + 1] & !hm) | (value >> (64 - off));
        }
    }

    pub fn try_set(&mut self, i: usize, value: u64) -> Result<()> {
        if i >= self.len {
            return Err(out_of_range(i, self.len));
        }
        if value > mask(self.width) {
            return Err(Error::ValueRange { value, width: self.width });
        }
        self.set_raw(i, value);
        Ok(())
    }

    pub fn push(&mut self, value: u64) {
        assert!(value <= mask(self.width), "value {value} exceeds width {}", self.width);
        let needed = ((self.len + 1) * self.width as usize).div_ceil(64);
        while self.words.len() < needed {
            self.words.push(0);
        }
        self.len += 1;
        self.set_raw(self.len - 1, value);
    }

    pub fn pop(&mut self) -> Option<u64> {
        if self.len == 0 {
            return None;
        }
        let v = self.get_unchecked_bounds(self.len - 1);
        self.set_raw(self.len - 1, 0);
        self.len -= 1;
        self.words.truncate((self.len * self.width as usize).div_ceil(64));
        Some(v)
    }

    pub fn last(&self) -> Option<u64> {
        self.len.checked_sub(1).map(|i| self.get_unchecked_bounds(i))
    }

    pub fn shrink_to_fit(&mut self) {
        self.words.shrink_to_fit();
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        let (x, y) = (self.get(a), self.get(b));
        self.set_raw(a, y);
        self.set_raw(b, x);
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get_unchecked_bounds(i))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Re-packs into the smallest width holding the current maximum.
    pub fn compacted(&self) -> IntVector {
        let width = bits_for(self.iter().max().unwrap_or(0));
        let mut out = IntVector::with_len(self.len, width).expect("valid width");
        for (i, v) in self.iter().enumerate() {
            out.set_raw(i, v);
        }
        out
    }

    /// Heap bytes of the packed payload.
    pub fn heap_bytes(&self) -> usize {
        self.words.heap_bytes()
    }

    /// Bytes this vector occupies when serialized.
    pub fn serialized_bytes(&self) -> u64 {
        INTVEC_HEADER_BYTES + 8 * (self.bit_len().div_ceil(64)) as u64
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntVector")
            .field("width", &self.width)
            .field("len", &self.len)
            .field("values", &self.iter().take(32).collect::<Vec<_>>())
            .finish()
    }
}

impl Persist for IntVector {
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree> {
        let node = NodeBuilder::open(name, w);
        write_frame_header(w, self.width, self.len as u64)?;
        let used = self.bit_len().div_ceil(64);
        let mut buf = Vec::with_capacity(used.min(8192) * 8);
        for chunk in self.words[..used].chunks(8192) {
            buf.clear();
            for word in chunk {
                buf.extend_from_slice(&word.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(node.close(w))
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let (width, len) = read_frame_header(r)?;
        let mut v = IntVector::with_len(len, width)?;
        let mut buf = vec![0u8; 8 * 8192];
        let total = v.words.len();
        let mut done = 0;
        while done < total {
            let n = (total - done).min(8192);
            persist::read_exact(r, &mut buf[..n * 8])?;
            for (k, bytes) in buf[..n * 8].chunks_exact(8).enumerate() {
                v.words[done + k] = u64::from_le_bytes(bytes.try_into().expect("8 bytes"));
            }
            done += n;
        }
        if let Some(&last) = v.words.last() {
            let tail = v.bit_len() % 64;
            if tail != 0 && last >> tail != 0 {
                return Err(Error::Format("nonzero padding bits in int vector".into()));
            }
        }
        Ok(v)
    }
}

fn write_frame_header<W: Write>(w: &mut W, width: u8, len: u64) -> Result<()> {
    persist::write_header(w, &INTVEC_MAGIC)?;
    persist::write_u8(w, width)?;
    persist::write_u64(w, len)?;
    Ok(())
}

fn read_frame_header<R: Read>(r: &mut R) -> Result<(u8, usize)> {
    persist::read_header(r, &INTVEC_MAGIC)?;
    let width = persist::read_u8(r)?;
    if width == 0 || width > 64 {
        return Err(Error::InvalidWidth(width));
    }
    let len = persist::read_usize(r)?;
    Ok((width, len))
}

/// Writes an [`IntVector`] frame element by element, holding one word.
pub struct IntVectorWriter<W: Write> {
    out: W,
    width: u8,
    len: u64,
    written: u64,
    word: u64,
    fill: u32,
}

impl<W: Write> IntVectorWriter<W> {
    pub fn new(mut out: W, width: u8, len: u64) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(Error::InvalidWidth(width));
        }
        write_frame_header(&mut out, width, len)?;
        Ok(IntVectorWriter { out, width, len, written: 0, word: 0, fill: 0 })
    }

    pub fn push(&mut self, value: u64) -> Result<()> {
        if value > mask(self.width) {
            return Err(Error::ValueRange { value, width: self.width });
        }
        if self.written == self.len {
            return Err(Error::InvalidArgument("more values than declared length".into()));
        }
        self.written += 1;
        let w = self.width as u32;
        self.word |= value << self.fill;
        if self.fill + w >= 64 {
            self.out.write_all(&self.word.to_le_bytes())?;
            let used = 64 - self.fill;
            self.word = if used == 64 { 0 } else { value >> used };
            self.fill = self.fill + w - 64;
        } else {
            self.fill += w;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        if self.written != self.len {
            return Err(Error::InvalidArgument(format!(
                "declared {} values, wrote {}",
                self.len, self.written
            )));
        }
        if self.fill > 0 {
            self.out.write_all(&self.word.to_le_bytes())?;
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Reads an [`IntVector`] frame sequentially without materializing it.
pub struct IntVectorReader<R: Read> {
    input: R,
    width: u8,
    len: usize,
    read: usize,
    word: u64,
    avail: u32,
}

impl<R: Read> IntVectorReader<R> {
    pub fn new(mut input: R) -> Result<Self> {
        let (width, len) = read_frame_header(&mut input)?;
        Ok(IntVectorReader { input, width, len, read: 0, word: 0, avail: 0 })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    fn next_word(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        persist::read_exact(&mut self.input, &mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    /// Next element, `Ok(None)` after the last one, an error on truncation.
    pub fn next_value(&mut self) -> Result<Option<u64>> {
        if self.read == self.len {
            return Ok(None);
        }
        self.read += 1;
        let w = self.width as u32;
        let m = mask(self.width);
        if self.avail >= w {
            let v = self.word & m;
            self.word = if w == 64 { 0 } else { self.word >> w };
            self.avail -= w;
            return Ok(Some(v));
        }
        let low = self.word;
        let have = self.avail;
        let fresh = self.next_word()?;
        let v = (low | if have == 64 { 0 } else { fresh << have }) & m;
        let used = w - have;
        self.word = if used == 64 { 0 } else { fresh >> used };
        self.avail = 64 - used;
        Ok(Some(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_vector() {
        let v = IntVector::from_slice(&[], 7).unwrap();
        assert_eq!(v.len(), 0);
        assert!(v.is_empty());
    }

    #[test]
    fn small_round_trip() {
        let v = IntVector::from_slice(&[5, 0, 3], 3).unwrap();
        assert_eq!(v.to_vec(), vec![5, 0, 3]);
    }

    #[test]
    fn rejects_wide_values() {
        assert!(matches!(
            IntVector::from_slice(&[8], 3),
            Err(Error::ValueRange { value: 8, width: 3 })
        ));
        assert!(matches!(IntVector::new(0), Err(Error::InvalidWidth(0))));
        assert!(matches!(IntVector::new(65), Err(Error::InvalidWidth(65))));
    }

    #[test]
    fn random_width_17_matches_plain_array() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let values: Vec<u64> = (0..10_000).map(|_| rng.random_range(0..1u64 << 17)).collect();
        let v = IntVector::from_slice(&values, 17).unwrap();
        assert_eq!(v.to_vec(), values);
    }

    #[test]
    fn serialized_size_is_header_plus_padded_payload() {
        let v = IntVector::from_slice(&vec![1; 100], 7).unwrap();
        let bytes = v.to_bytes().unwrap();
        assert_eq!(bytes.len() as u64, 18 + 700u64.div_ceil(64) * 8);
        assert_eq!(bytes.len() as u64, v.serialized_bytes());
        assert_eq!(v.size_tree("v").unwrap().size, bytes.len() as u64);
    }

    #[test]
    fn push_pop_track_values() {
        let mut v = IntVector::new(13).unwrap();
        for i in 0..1000 {
            v.push(i * 7 % 8192);
        }
        for i in (0..1000).rev() {
            assert_eq!(v.pop(), Some(i * 7 % 8192));
        }
        assert_eq!(v.pop(), None);
    }

    #[test]
    fn truncated_frame_is_an_error() {
        let v = IntVector::from_slice(&[1, 2, 3, 4, 5], 40).unwrap();
        let bytes = v.to_bytes().unwrap();
        let err = IntVector::from_bytes(&bytes[..bytes.len() - 3]).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn tracked_allocation_is_visible() {
        use crate::tooling::monitor::MemoryMonitor;
        let mon = MemoryMonitor::start();
        let v = IntVector::from_slice(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10], 8).unwrap();
        let report = mon.finish();
        assert!(!report.events.is_empty());
        assert!(report.peak >= v.heap_bytes() as u64);
    }

    proptest! {
        #[test]
        fn frame_round_trip_is_bit_exact(width in 1u8..=64, raw in proptest::collection::vec(any::<u64>(), 0..200)) {
            let values: Vec<u64> = raw.iter().map(|&x| x & mask(width)).collect();
            let v = IntVector::from_slice(&values, width).unwrap();
            let bytes = v.to_bytes().unwrap();
            let back = IntVector::from_bytes(&bytes).unwrap();
            prop_assert_eq!(&back, &v);
            prop_assert_eq!(back.to_bytes().unwrap(), bytes.clone());

            let mut w = IntVectorWriter::new(Vec::new(), width, values.len() as u64).unwrap();
            for &x in &values { w.push(x).unwrap(); }
            prop_assert_eq!(w.finish().unwrap(), bytes.clone());

            let mut r = IntVectorReader::new(&bytes[..]).unwrap();
            let mut streamed = Vec::new();
            while let Some(x) = r.next_value().unwrap() { streamed.push(x); }
            prop_assert_eq!(streamed, values);
        }
    }
}
