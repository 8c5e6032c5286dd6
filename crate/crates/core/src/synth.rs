//! Seeded synthetic corpora with geometric document lengths and
//! Zipf-distributed symbols.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Zipf};

use crate::construct::{Collection, Mode};
use crate::error::{Error, Result};

/// Separator written between generated documents.
pub const DOC_SEPARATOR: u8 = b'\n';

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub num_docs: usize,
    /// Mean document length in symbols (bytes or tokens).
    pub avg_len: usize,
    /// Number of distinct symbols that may be drawn.
    pub sigma: usize,
    /// Zipf exponent; 0 gives uniform symbols.
    pub zipf: f64,
    pub seed: u64,
    pub mode: Mode,
    /// When set, these documents are emitted verbatim instead.
    pub fixed_docs: Option<Vec<String>>,
}

impl CorpusSpec {
    pub fn new(num_docs: usize, avg_len: usize, sigma: usize, zipf: f64, seed: u64) -> Self {
        CorpusSpec { num_docs, avg_len, sigma, zipf, seed, mode: Mode::Byte, fixed_docs: None }
    }

    pub fn word(mut self) -> Self {
        self.mode = Mode::Word;
        self
    }

    /// The two-document collection `["aba", "ab"]`.
    pub fn running_example() -> Self {
        let mut spec = Self::new(2, 3, 2, 0.0, 0);
        spec.fixed_docs = Some(vec!["aba".into(), "ab".into()]);
        spec
    }
}

/// Byte used for the `k`-th most frequent symbol: letters, digits, then the
/// remaining non-reserved bytes.
pub fn symbol_byte(k: usize) -> Option<u8> {
    const HEAD: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    if let Some(&b) = HEAD.get(k) {
        return Some(b);
    }
    (2u8..=255)
        .filter(|b| !HEAD.contains(b) && *b != DOC_SEPARATOR)
        .nth(k - HEAD.len())
}

/// Largest alphabet available in byte mode.
pub const MAX_BYTE_SIGMA: usize = 253;

/// Token for the `k`-th most frequent word.
pub fn symbol_word(k: usize) -> String {
    format!("w{k}")
}

/// Documents as symbol ranks (0 = most frequent).
pub fn gen_ranks(spec: &CorpusSpec) -> Result<Vec<Vec<usize>>> {
    if spec.sigma < 1 {
        return Err(Error::InvalidArgument("alphabet size must be at least 1".into()));
    }
    if spec.num_docs < 1 || spec.avg_len < 1 {
        return Err(Error::InvalidArgument("need at least one document of mean length at least 1".into()));
    }
    if spec.mode == Mode::Byte && spec.sigma > MAX_BYTE_SIGMA {
        return Err(Error::InvalidArgument(format!("byte corpora support at most {MAX_BYTE_SIGMA} symbols")));
    }
    if !(spec.zipf >= 0.0 && spec.zipf.is_finite()) {
        return Err(Error::InvalidArgument("Zipf exponent must be finite and non-negative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // 1 + Geometric(p) has mean 1 / p.
    let lens = Geometric::new(1.0 / spec.avg_len as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let zipf = Zipf::new(spec.sigma as f64, spec.zipf).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok((0..spec.num_docs)
        .map(|_| {
            let len = 1 + lens.sample(&mut rng) as usize;
            (0..len).map(|_| (zipf.sample(&mut rng) as usize - 1).min(spec.sigma - 1)).collect()
        })
        .collect())
}

/// Collection file bytes: documents separated by newlines.
pub fn gen_corpus(spec: &CorpusSpec) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    if let Some(docs) = &spec.fixed_docs {
        for d in docs {
            out.extend_from_slice(d.as_bytes());
            out.push(DOC_SEPARATOR);
        }
        return Ok(out);
    }
    for doc in gen_ranks(spec)? {
        match spec.mode {
            Mode::Byte => out.extend(doc.iter().map(|&k| symbol_byte(k).expect("alphabet checked"))),
            Mode::Word => {
                let words: Vec<String> = doc.iter().map(|&k| symbol_word(k)).collect();
                out.extend_from_slice(words.join(" ").as_bytes());
            }
        }
        out.push(DOC_SEPARATOR);
    }
    Ok(out)
}

pub fn write_corpus(spec: &CorpusSpec, path: &Path) -> Result<()> {
    std::fs::write(path, gen_corpus(spec)?)?;
    Ok(())
}

/// The generated corpus parsed as a collection.
pub fn gen_collection(spec: &CorpusSpec) -> Result<Collection> {
    Collection::parse(&gen_corpus(spec)?, spec.mode, DOC_SEPARATOR)
}

/// Byte corpus of roughly `bytes` bytes.
pub fn sized_corpus(bytes: usize, sigma: usize, zipf: f64, seed: u64) -> Result<Vec<u8>> {
    let avg_len = 1000;
    let docs = (bytes / (avg_len + 1)).max(1);
    gen_corpus(&CorpusSpec::new(docs, avg_len, sigma, zipf, seed))
}
