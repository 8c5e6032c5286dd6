use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::bitvec::BitVector;
use crate::error::{Error, Result};
use crate::intvec::{bits_for, IntVector};

/// Terminator `$`, the unique smallest symbol, last in the text.
pub const TERMINATOR: u64 = 0;
/// Document separator `#`.
pub const SEPARATOR: u64 = 1;
/// Smallest symbol a document may contain.
pub const FIRST_SYMBOL: u64 = 2;
/// Alphabet size of byte mode: every byte value, two of them reserved.
pub const BYTE_SIGMA: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Byte,
    Word,
}

impl Mode {
    pub fn tag(self) -> u8 {
        match self {
            Mode::Byte => 0,
            Mode::Word => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Mode::Byte),
            1 => Ok(Mode::Word),
            t => Err(Error::Format(format!("unknown alphabet mode tag {t}"))),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "byte" => Ok(Mode::Byte),
            "word" => Ok(Mode::Word),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

/// Word-mode vocabulary: tokens in lexicographic order, token `k` has id `k + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    tokens: Vec<String>,
}

impl Vocabulary {
    pub fn from_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Self {
        let set: BTreeSet<&str> = tokens.into_iter().collect();
        Vocabulary { tokens: set.into_iter().map(str::to_string).collect() }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u64> {
        self.tokens
            .binary_search_by(|t| t.as_str().cmp(token))
            .ok()
            .map(|k| k as u64 + FIRST_SYMBOL)
    }

    pub fn token(&self, id: u64) -> Option<&str> {
        let k = id.checked_sub(FIRST_SYMBOL)? as usize;
        self.tokens.get(k).map(String::as_str)
    }

    /// Alphabet size including both sentinels.
    pub fn sigma(&self) -> u64 {
        self.tokens.len() as u64 + FIRST_SYMBOL
    }

    /// Writes `token\tid` lines.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(std::fs::File::create(path)?);
        for (k, t) in self.tokens.iter().enumerate() {
            writeln!(out, "{t}\t{}", k as u64 + FIRST_SYMBOL)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let input = BufReader::new(std::fs::File::open(path)?);
        let mut tokens = Vec::new();
        for (line_no, line) in input.lines().enumerate() {
            let line = line?;
            let (tok, id) = line
                .split_once('\t')
                .ok_or_else(|| Error::Format(format!("vocabulary line {} lacks a tab", line_no + 1)))?;
            let id: u64 = id
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad id on vocabulary line {}", line_no + 1)))?;
            if id != tokens.len() as u64 + FIRST_SYMBOL {
                return Err(Error::Format(format!("vocabulary ids not consecutive at line {}", line_no + 1)));
            }
            tokens.push(tok.to_string());
        }
        if tokens.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("vocabulary not in lexicographic order".into()));
        }
        Ok(Vocabulary { tokens })
    }
}

/// A document collection concatenated into the text
/// `T = d_0 # d_1 # ... d_{N-1} # $` over remapped symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    mode: Mode,
    text: IntVector,
    sigma: u64,
    doc_lens: Vec<usize>,
    vocab: Option<Vocabulary>,
}

fn split_docs(data: &[u8], sep: u8) -> Vec<&[u8]> {
    let mut docs: Vec<&[u8]> = data.split(|&b| b == sep).collect();
    // A trailing separator terminates the last document.
    if docs.len() > 1 && docs.last().is_some_and(|d| d.is_empty()) {
        docs.pop();
    }
    docs
}

impl Collection {
    /// Parses a collection file: documents separated by `sep`.
    pub fn parse(data: &[u8], mode: Mode, sep: u8) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty("collection"));
        }
        Self::from_docs(&split_docs(data, sep), mode)
    }

    pub fn read_file(path: &Path, mode: Mode, sep: u8) -> Result<Self> {
        Self::parse(&std::fs::read(path)?, mode, sep)
    }

    pub fn from_docs<D: AsRef<[u8]>>(docs: &[D], mode: Mode) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::Empty("collection"));
        }
        match mode {
            Mode::Byte => Self::from_byte_docs(docs),
            Mode::Word => Self::from_word_docs(docs),
        }
    }

    fn from_byte_docs<D: AsRef<[u8]>>(docs: &[D]) -> Result<Self> {
        let n = docs.iter().map(|d| d.as_ref().len()).sum::<usize>() + docs.len() + 1;
        let mut text = IntVector::with_capacity(n, bits_for(BYTE_SIGMA - 1))?;
        let mut doc_lens = Vec::with_capacity(docs.len());
        for d in docs {
            let d = d.as_ref();
            for &b in d {
                if (b as u64) < FIRST_SYMBOL {
                    return Err(Error::ReservedSymbol(b));
                }
                text.push(b as u64);
            }
            text.push(SEPARATOR);
            doc_lens.push(d.len());
        }
        text.push(TERMINATOR);
        Ok(Collection { mode: Mode::Byte, text, sigma: BYTE_SIGMA, doc_lens, vocab: None })
    }

    fn from_word_docs<D: AsRef<[u8]>>(docs: &[D]) -> Result<Self> {
        let strs = docs
            .iter()
            .map(|d| {
                std::str::from_utf8(d.as_ref())
                    .map_err(|_| Error::InvalidArgument("word-mode input must be UTF-8".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let vocab = Vocabulary::from_tokens(strs.iter().flat_map(|s| s.split_whitespace()));
        let sigma = vocab.sigma();
        let n = strs.iter().map(|s| s.split_whitespace().count()).sum::<usize>() + strs.len() + 1;
        let mut text = IntVector::with_capacity(n, bits_for(sigma - 1))?;
        let mut doc_lens = Vec::with_capacity(strs.len());
        for s in &strs {
            let mut len = 0;
            for tok in s.split_whitespace() {
                text.push(vocab.id(tok).expect("token in vocabulary"));
                len += 1;
            }
            text.push(SEPARATOR);
            doc_lens.push(len);
        }
        text.push(TERMINATOR);
        Ok(Collection { mode: Mode::Word, text, sigma, doc_lens, vocab: Some(vocab) })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn text(&self) -> &IntVector {
        &self.text
    }

    /// Text length `n`, sentinels included.
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn num_docs(&self) -> usize {
        self.doc_lens.len()
    }

    pub fn doc_lens(&self) -> &[usize] {
        &self.doc_lens
    }

    /// Start of every document in the text.
    pub fn doc_starts(&self) -> Vec<usize> {
        let mut acc = 0;
        self.doc_lens
            .iter()
            .map(|&l| {
                let s = acc;
                acc += l + 1;
                s
            })
            .collect()
    }

    pub fn doc(&self, d: usize) -> Vec<u64> {
        let start = self.doc_starts()[d];
        (start..start + self.doc_lens[d]).map(|i| self.text.get(i)).collect()
    }

    pub fn vocab(&self) -> Option<&Vocabulary> {
        self.vocab.as_ref()
    }

    /// `border[i] = 1` exactly where `T[i]` is a separator.
    pub fn border(&self) -> BitVector {
        let mut bv = BitVector::new(self.text.len());
        let mut pos = 0;
        for &l in &self.doc_lens {
            pos += l;
            bv.set(pos, true);
            pos += 1;
        }
        bv
    }

    /// Releases the text, keeping the metadata needed after it is on disk.
    pub fn into_parts(self) -> (IntVector, CollectionMeta) {
        let meta = CollectionMeta {
            mode: self.mode,
            len: self.text.len(),
            sigma: self.sigma,
            doc_lens: self.doc_lens,
            vocab: self.vocab,
        };
        (self.text, meta)
    }

    /// Maps a pattern to symbols; `None` if it cannot occur in any document.
    pub fn map_pattern(&self, pattern: &[u8]) -> Option<Vec<u64>> {
        map_pattern(self.mode, self.vocab.as_ref(), pattern)
    }
}

/// Everything about a collection except the text itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionMeta {
    pub mode: Mode,
    pub len: usize,
    pub sigma: u64,
    pub doc_lens: Vec<usize>,
    pub vocab: Option<Vocabulary>,
}

/// Maps raw pattern bytes (byte mode) or whitespace-separated tokens (word
/// mode) to text symbols. Reserved bytes and unknown tokens yield `None`.
pub fn map_pattern(mode: Mode, vocab: Option<&Vocabulary>, pattern: &[u8]) -> Option<Vec<u64>> {
    match mode {
        Mode::Byte => pattern
            .iter()
            .map(|&b| (b as u64 >= FIRST_SYMBOL).then_some(b as u64))
            .collect(),
        Mode::Word => {
            let vocab = vocab?;
            let s = std::str::from_utf8(pattern).ok()?;
            s.split_whitespace().map(|t| vocab.id(t)).collect()
        }
    }
}

/// Inverse of [`map_pattern`].
pub fn render_symbols(mode: Mode, vocab: Option<&Vocabulary>, symbols: &[u64]) -> Vec<u8> {
    match mode {
        Mode::Byte => symbols.iter().map(|&s| s as u8).collect(),
        Mode::Word => {
            let words: Vec<&str> = symbols
                .iter()
                .map(|&s| vocab.and_then(|v| v.token(s)).unwrap_or("?"))
                .collect();
            words.join(" ").into_bytes()
        }
    }
}
