//! Semi-external construction pipeline.
//!
//! The text goes to disk first and only the structure a phase needs is
//! resident: the suffix array is sorted from the text file and written out,
//! the BWT is produced by streaming the suffix array against the text, and
//! later phases stream the suffix array, BWT or text files again.

use std::path::{Path, PathBuf};

use super::{Algo, DocIndex, GreedyIndex, SadaIndex, SortIndex};
use crate::bitvec::{BitVector, PlainBitVector};
use crate::construct::{
    bwt_streaming, doc_array_streaming, doc_isas, next_occurrence, prev_occurrence, psi_from_bwt_file, Collection,
    CollectionMeta, DiskSymbols, SuffixSorter,
};
use crate::csa::{Alphabet, CsaPsi, CsaWt, SampleKind, SADA_SA_RATE, SPARSE_SA_RATE};
use crate::error::Result;
use crate::intvec::IntVector;
use crate::persist::Persist;
use crate::rmq::RmqSct;
use crate::tooling::monitor::in_phase;
use crate::wavelet::BalancedWt;

/// Phase labels of a SADA build, in order.
pub const SADA_PHASES: [&str; 7] = ["SA", "BWT", "Psi", "doc_isa", "D", "rminq", "rmaxq"];
/// Phase labels of a GREEDY build, in order.
pub const GREEDY_PHASES: [&str; 5] = ["SA", "BWT", "CSA", "D", "wtd"];
/// Phase labels of a SORT build, in order.
pub const SORT_PHASES: [&str; 4] = ["SA", "BWT", "CSA", "D"];

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub algo: Algo,
    /// SA sampling rate; the algorithm's default when `None`.
    pub sa_rate: Option<usize>,
    pub sample_kind: SampleKind,
    /// Directory for intermediate files, kept after the build. A fresh
    /// temporary directory is used and removed when `None`.
    pub work_dir: Option<PathBuf>,
}

impl BuildOptions {
    pub fn new(algo: Algo) -> Self {
        BuildOptions { algo, sa_rate: None, sample_kind: SampleKind::TextOrder, work_dir: None }
    }

    pub fn with_rate(mut self, rate: usize) -> Self {
        self.sa_rate = Some(rate);
        self
    }

    pub fn rate(&self) -> usize {
        self.sa_rate.unwrap_or(match self.algo {
            Algo::Sada => SADA_SA_RATE,
            Algo::Greedy | Algo::Sort => SPARSE_SA_RATE,
        })
    }
}

pub(crate) fn border_bits(doc_lens: &[usize], n: usize) -> BitVector {
    let mut bv = BitVector::new(n);
    let mut pos = 0;
    for &l in doc_lens {
        pos += l;
        bv.set(pos, true);
        pos += 1;
    }
    bv
}

struct Files {
    text: PathBuf,
    sa: PathBuf,
    bwt: PathBuf,
}

impl Files {
    fn in_dir(dir: &Path) -> Self {
        Files { text: dir.join("text.iv"), sa: dir.join("sa.iv"), bwt: dir.join("bwt.iv") }
    }
}

/// Builds an index, consuming the collection so the text can be released
/// before suffix sorting. Phases are reported to the active memory monitor.
pub fn build_index(collection: Collection, opts: &BuildOptions) -> Result<DocIndex> {
    let (text, meta) = collection.into_parts();
    let tmp;
    let dir = match &opts.work_dir {
        Some(d) => {
            std::fs::create_dir_all(d)?;
            d.clone()
        }
        None => {
            tmp = tempfile::tempdir()?;
            tmp.path().to_path_buf()
        }
    };
    let files = Files::in_dir(&dir);
    text.save(&files.text)?;
    drop(text);

    in_phase("SA", || -> Result<()> {
        let sorter = SuffixSorter::initial_groups(&DiskSymbols::open(&files.text)?, meta.sigma)?;
        let sa = sorter.prefix_doubling();
        sa.save(&files.sa)?;
        Ok(())
    })?;
    in_phase("BWT", || -> Result<()> {
        let t = IntVector::load(&files.text)?;
        bwt_streaming(&t, &files.sa, &files.bwt)
    })?;

    let border = PlainBitVector::new(border_bits(&meta.doc_lens, meta.len));
    let vocab = meta.vocab.clone();
    let mode = meta.mode;
    Ok(match opts.algo {
        Algo::Sada => DocIndex::from_sada(build_sada(&files, &meta, border, opts)?, mode, vocab),
        Algo::Greedy => {
            let csa = build_csa_wt(&files, &meta, opts)?;
            let d = in_phase("D", || doc_array_streaming(&files.sa, &border))?;
            let docs = meta.doc_lens.len() as u64;
            let wtd = in_phase("wtd", || BalancedWt::new(&d, docs + 1))?;
            drop(d);
            DocIndex::from_greedy(GreedyIndex::from_parts(csa, wtd)?, mode, vocab)
        }
        Algo::Sort => {
            let csa = build_csa_wt(&files, &meta, opts)?;
            let d = in_phase("D", || doc_array_streaming(&files.sa, &border))?;
            DocIndex::from_sort(SortIndex::from_parts(csa, d, meta.doc_lens.len())?, mode, vocab)
        }
    })
}

fn build_sada(files: &Files, meta: &CollectionMeta, border: PlainBitVector, opts: &BuildOptions) -> Result<SadaIndex> {
    let csa = in_phase("Psi", || -> Result<CsaPsi> {
        let psi = psi_from_bwt_file(&files.bwt, meta.sigma)?;
        let alphabet = Alphabet::from_text(&DiskSymbols::open(&files.bwt)?, meta.sigma, meta.mode)?;
        CsaPsi::from_psi(alphabet, &psi, &DiskSymbols::open(&files.sa)?, opts.sample_kind, opts.rate())
    })?;
    let doc_isa = in_phase("doc_isa", || doc_isas(&DiskSymbols::open(&files.text)?, &meta.doc_lens, meta.sigma))?;
    let docs = meta.doc_lens.len();
    let d = in_phase("D", || doc_array_streaming(&files.sa, &border))?;
    let rminq = in_phase("rminq", || {
        let c = prev_occurrence(&d, docs);
        RmqSct::build(c.len(), |i| c.get(i) as i64 - 1)
    })?;
    let rmaxq = in_phase("rmaxq", || {
        let c = next_occurrence(&d, docs);
        RmqSct::build(c.len(), |i| -(c.get(i) as i64))
    })?;
    drop(d);
    SadaIndex::from_parts(csa, border, rminq, rmaxq, doc_isa)
}

fn build_csa_wt(files: &Files, meta: &CollectionMeta, opts: &BuildOptions) -> Result<CsaWt> {
    in_phase("CSA", || {
        let bwt = IntVector::load(&files.bwt)?;
        let alphabet = Alphabet::from_text(&bwt, meta.sigma, meta.mode)?;
        CsaWt::from_bwt(alphabet, &bwt, &DiskSymbols::open(&files.sa)?, opts.sample_kind, opts.rate())
    })
}
