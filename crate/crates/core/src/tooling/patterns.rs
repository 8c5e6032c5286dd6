//! Pattern sampling and the pattern file format.
//!
//! A pattern file holds one pattern per line. Byte-mode patterns are raw
//! bytes; word-mode patterns are tokens separated by single spaces. The
//! bytes `\\`, `\n`, `\r`, `\t` and any other byte outside printable ASCII
//! are escaped (`\\`, `\n`, `\r`, `\t`, `\xHH`).

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::{render_symbols, Collection};
use crate::error::{Error, Result};

/// Default number of patterns per length.
pub const DEFAULT_PATTERN_COUNT: usize = 200;

/// Samples `count` substrings of `len` symbols, uniformly over all start
/// positions whose window lies inside one document. Returns an empty list
/// (and logs a warning) when no document is long enough.
pub fn gen_patterns(collection: &Collection, len: usize, count: usize, seed: u64) -> Vec<Vec<u64>> {
    if len == 0 {
        log::warn!("pattern length 0 requested; no patterns generated");
        return Vec::new();
    }
    let starts = collection.doc_starts();
    let lens = collection.doc_lens();
    // cum[d] = valid windows in documents before d.
    let mut cum = Vec::with_capacity(lens.len() + 1);
    let mut total = 0u64;
    cum.push(0);
    for &l in lens {
        total += (l + 1).saturating_sub(len) as u64;
        cum.push(total);
    }
    if total == 0 {
        log::warn!("no document has {len} or more symbols; no patterns generated");
        return Vec::new();
    }
    let text = collection.text();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = rng.random_range(0..total);
            let d = cum.partition_point(|&c| c <= x) - 1;
            let start = starts[d] + (x - cum[d]) as usize;
            (start..start + len).map(|i| text.get(i)).collect()
        })
        .collect()
}

pub fn escape_pattern(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len());
    for &b in bytes {
        match b {
            b'\\' => s.push_str("\\\\"),
            b'\n' => s.push_str("\\n"),
            b'\r' => s.push_str("\\r"),
            b'\t' => s.push_str("\\t"),
            0x20..=0x7e => s.push(b as char),
            _ => s.push_str(&format!("\\x{b:02x}")),
        }
    }
    s
}

pub fn unescape_pattern(line: &str) -> Result<Vec<u8>> {
    let bytes = line.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            out.push(bytes[i]);
            i += 1;
            continue;
        }
        let bad = || Error::Format(format!("bad escape in pattern line '{line}'"));
        match bytes.get(i + 1).ok_or_else(bad)? {
            b'\\' => out.push(b'\\'),
            b'n' => out.push(b'\n'),
            b'r' => out.push(b'\r'),
            b't' => out.push(b'\t'),
            b'x' => {
                let hex = line.get(i + 2..i + 4).ok_or_else(bad)?;
                out.push(u8::from_str_radix(hex, 16).map_err(|_| bad())?);
                i += 2;
            }
            _ => return Err(bad()),
        }
        i += 2;
    }
    Ok(out)
}

/// Writes symbol patterns in the collection's surface form.
pub fn write_patterns<W: Write>(out: &mut W, collection: &Collection, patterns: &[Vec<u64>]) -> Result<()> {
    for p in patterns {
        let raw = render_symbols(collection.mode(), collection.vocab(), p);
        writeln!(out, "{}", escape_pattern(&raw))?;
    }
    Ok(())
}

/// Reads a pattern file into raw patterns.
pub fn read_patterns(path: &Path) -> Result<Vec<Vec<u8>>> {
    let r = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        out.push(unescape_pattern(line)?);
    }
    Ok(out)
}
