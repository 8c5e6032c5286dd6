//! Derived arrays: BWT, Psi, document array, C/C' and per-document inverse
//! suffix arrays. The `*_streaming` variants read their large inputs from
//! disk sequentially so only their outputs (and `T` for the BWT) are resident.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use crate::bitvec::{BitRank, PlainBitVector};
use crate::error::{Error, Result};
use crate::intvec::{bits_for, IntVector, IntVectorReader, IntVectorWriter};

use super::collection::TERMINATOR;
use super::sa::{build_sa, inverse, DiskSymbols, SymbolSource};

const BUF: usize = 1 << 16;

fn open_reader(path: &Path) -> Result<IntVectorReader<BufReader<File>>> {
    IntVectorReader::new(BufReader::with_capacity(BUF, File::open(path)?))
}

fn next_or_truncated<R: std::io::Read>(r: &mut IntVectorReader<R>) -> Result<u64> {
    r.next_value()?.ok_or_else(|| Error::Format("truncated input".into()))
}

/// `BWT[i] = T[(SA[i] - 1) mod n]`.
pub fn bwt(text: &IntVector, sa: &IntVector) -> IntVector {
    let n = text.len();
    let mut out = IntVector::with_len(n, text.width()).expect("valid width");
    for (i, s) in sa.iter().enumerate() {
        out.set(i, text.get((s as usize + n - 1) % n));
    }
    out
}

/// Writes the BWT to `bwt_path` while reading the SA from `sa_path`;
/// only `text` is held in memory.
pub fn bwt_streaming(text: &IntVector, sa_path: &Path, bwt_path: &Path) -> Result<()> {
    let n = text.len();
    let mut sa = open_reader(sa_path)?;
    if sa.len() != n {
        return Err(Error::Format(format!("suffix array has {} entries, text {n}", sa.len())));
    }
    let out = BufWriter::with_capacity(BUF, File::create(bwt_path)?);
    let mut w = IntVectorWriter::new(out, text.width(), n as u64)?;
    for _ in 0..n {
        let s = next_or_truncated(&mut sa)? as usize;
        w.push(text.get((s + n - 1) % n))?;
    }
    w.finish()?;
    Ok(())
}

/// Symbol counts prefix table: `cnt[c]` suffixes start with a symbol `< c`.
pub fn symbol_counts<S: SymbolSource + ?Sized>(text: &S, sigma: u64) -> Result<Vec<u64>> {
    let mut cnt = vec![0u64; sigma as usize + 1];
    let mut bad = None;
    text.for_each_symbol(&mut |c| {
        if c >= sigma {
            bad.get_or_insert(c);
        } else {
            cnt[c as usize + 1] += 1;
        }
    })?;
    if let Some(c) = bad {
        return Err(Error::SymbolRange { symbol: c, sigma });
    }
    for c in 0..sigma as usize {
        cnt[c + 1] += cnt[c];
    }
    Ok(cnt)
}

/// `Psi[LF[i]] = i` with `LF[i] = cnt[BWT[i]] + rank(BWT[i], i)`, scanning
/// the BWT once after counting.
pub fn psi_from_bwt<S: SymbolSource + ?Sized>(bwt: &S, sigma: u64) -> Result<IntVector> {
    let n = bwt.len();
    let cnt = symbol_counts(bwt, sigma)?;
    let mut next = cnt;
    let mut psi = IntVector::with_len(n, bits_for(n.saturating_sub(1) as u64))?;
    let mut i = 0u64;
    bwt.for_each_symbol(&mut |c| {
        let lf = next[c as usize];
        next[c as usize] += 1;
        psi.set(lf as usize, i);
        i += 1;
    })?;
    Ok(psi)
}

pub fn psi_from_bwt_file(bwt_path: &Path, sigma: u64) -> Result<IntVector> {
    psi_from_bwt(&DiskSymbols::open(bwt_path)?, sigma)
}

/// `Psi[i] = ISA[(SA[i] + 1) mod n]`.
pub fn psi_from_sa(sa: &IntVector) -> IntVector {
    let n = sa.len();
    let isa = inverse(sa);
    let mut psi = IntVector::with_len(n, sa.width()).expect("valid width");
    for (i, s) in sa.iter().enumerate() {
        psi.set(i, isa.get((s as usize + 1) % n));
    }
    psi
}

/// `D[i] = rank1(border, SA[i])`; the `$`-suffix gets `N`.
pub fn doc_array<S: SymbolSource + ?Sized>(sa: &S, border: &PlainBitVector) -> Result<IntVector> {
    let docs = border.count_ones();
    let mut d = IntVector::with_len(sa.len(), bits_for(docs as u64))?;
    let mut i = 0usize;
    let mut bad = None;
    sa.for_each_symbol(&mut |s| {
        if s as usize >= border.len() {
            bad.get_or_insert(s);
            return;
        }
        d.set(i, border.rank1(s as usize) as u64);
        i += 1;
    })?;
    if let Some(s) = bad {
        return Err(Error::Format(format!("suffix {s} beyond text length {}", border.len())));
    }
    Ok(d)
}

pub fn doc_array_streaming(sa_path: &Path, border: &PlainBitVector) -> Result<IntVector> {
    let src = DiskSymbols::open(sa_path)?;
    if src.len() != border.len() {
        return Err(Error::Format("suffix array and border lengths differ".into()));
    }
    doc_array(&src, border)
}

/// `C[i] + 1` where `C[i]` is the last `j < i` with `D[j] = D[i]`, or -1.
pub fn prev_occurrence(d: &IntVector, docs: usize) -> IntVector {
    let n = d.len();
    let mut last = IntVector::with_len(docs + 1, bits_for(n as u64)).expect("valid width");
    let mut c = IntVector::with_len(n, bits_for(n as u64)).expect("valid width");
    for (i, x) in d.iter().enumerate() {
        c.set(i, last.get(x as usize));
        last.set(x as usize, i as u64 + 1);
    }
    c
}

/// `C'[i]`, the first `j > i` with `D[j] = D[i]`, or `n`.
pub fn next_occurrence(d: &IntVector, docs: usize) -> IntVector {
    let n = d.len();
    let w = bits_for(n as u64);
    let mut next = IntVector::with_len(docs + 1, w).expect("valid width");
    for x in 0..=docs {
        next.set(x, n as u64);
    }
    let mut c = IntVector::with_len(n, w).expect("valid width");
    for i in (0..n).rev() {
        let x = d.get(i) as usize;
        c.set(i, next.get(x));
        next.set(x, i as u64);
    }
    c
}

/// Local inverse suffix array of one document with its own terminator.
pub fn local_isa(doc: &[u64], sigma: u64) -> Result<IntVector> {
    let mut t = doc.to_vec();
    t.push(TERMINATOR);
    let sa = build_sa(t.as_slice(), sigma)?;
    let mut isa = IntVector::with_len(t.len(), bits_for(doc.len() as u64))?;
    for (i, s) in sa.iter().enumerate() {
        isa.set(s as usize, i as u64);
    }
    Ok(isa)
}

/// Inverse suffix arrays of all documents, reading the text sequentially.
/// `doc_lens` gives every document's length; separators follow each one.
pub fn doc_isas<S: SymbolSource + ?Sized>(text: &S, doc_lens: &[usize], sigma: u64) -> Result<Vec<IntVector>> {
    let mut out = Vec::with_capacity(doc_lens.len());
    let mut cur: Vec<u64> = Vec::new();
    let mut d = 0usize;
    let mut err = None;
    text.for_each_symbol(&mut |c| {
        if err.is_some() || d >= doc_lens.len() {
            return;
        }
        if cur.len() < doc_lens[d] {
            cur.push(c);
            return;
        }
        // `c` is the separator closing document `d`.
        match local_isa(&cur, sigma) {
            Ok(isa) => out.push(isa),
            Err(e) => err = Some(e),
        }
        cur.clear();
        d += 1;
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    if out.len() != doc_lens.len() {
        return Err(Error::Format("text shorter than the document lengths".into()));
    }
    Ok(out)
}
