//! Python bindings: build, load, save and query document indexes.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use succdoc::construct::{Collection, Mode};
use succdoc::docindex::{build_index, Algo, BuildOptions, DocIndex, DocumentIndex, Ranking};
use succdoc::persist::Persist;
use succdoc::synth::{gen_corpus, CorpusSpec};
use succdoc::tooling::patterns::gen_patterns;
use succdoc::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

/// A top-k document retrieval index.
#[pyclass(name = "Index", module = "pysuccdoc", frozen)]
struct PyIndex {
    inner: DocIndex,
}

#[pymethods]
impl PyIndex {
    /// Builds an index over `docs` (bytes objects, or strings in word mode).
    #[staticmethod]
    #[pyo3(signature = (docs, algo = "sada", mode = "byte", sa_rate = None))]
    fn build(py: Python<'_>, docs: Vec<Vec<u8>>, algo: &str, mode: &str, sa_rate: Option<usize>) -> PyResult<Self> {
        let algo: Algo = parse(algo)?;
        let mode: Mode = parse(mode)?;
        let mut opts = BuildOptions::new(algo);
        opts.sa_rate = sa_rate;
        let inner = py.detach(|| Collection::from_docs(&docs, mode).and_then(|c| build_index(c, &opts))).map_err(err)?;
        Ok(PyIndex { inner })
    }

    /// Loads an index file (and its vocabulary in word mode).
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyIndex { inner: DocIndex::load_with_vocab(&path).map_err(err)? })
    }

    /// Writes the index and returns its size in bytes.
    fn save(&self, path: PathBuf) -> PyResult<u64> {
        Ok(self.inner.save_with_vocab(&path).map_err(err)?.size)
    }

    /// `(doc, tf, score)` for the `k` best documents.
    #[pyo3(signature = (pattern, k = 10, ranking = "freq"))]
    fn query(&self, py: Python<'_>, pattern: Vec<u8>, k: usize, ranking: &str) -> PyResult<Vec<(usize, usize, f64)>> {
        let ranking: Ranking = parse(ranking)?;
        let hits = py.detach(|| self.inner.query(&pattern, k, ranking));
        Ok(hits.into_iter().map(|h| (h.doc, h.tf, h.score)).collect())
    }

    /// Number of documents containing `pattern`.
    fn df(&self, pattern: Vec<u8>) -> usize {
        self.inner.map_pattern(&pattern).map_or(0, |p| self.inner.df(&p))
    }

    /// Size breakdown of the serialized index as JSON.
    fn size_report(&self) -> PyResult<String> {
        Ok(self.inner.size_tree("index").map_err(err)?.to_json())
    }

    #[getter]
    fn algo(&self) -> &'static str {
        self.inner.algo().name()
    }

    #[getter]
    fn num_docs(&self) -> usize {
        self.inner.num_docs()
    }

    fn __len__(&self) -> usize {
        self.inner.text_len()
    }

    fn __repr__(&self) -> String {
        format!("Index(algo={}, docs={}, n={})", self.inner.algo(), self.inner.num_docs(), self.inner.text_len())
    }
}

/// Synthetic collection file contents, one document per line.
#[pyfunction]
#[pyo3(signature = (docs, avg_len = 100, sigma = 4, zipf = 1.0, seed = 0, mode = "byte"))]
fn synth_corpus(docs: usize, avg_len: usize, sigma: usize, zipf: f64, seed: u64, mode: &str) -> PyResult<Vec<u8>> {
    let mut spec = CorpusSpec::new(docs, avg_len, sigma, zipf, seed);
    spec.mode = parse(mode)?;
    gen_corpus(&spec).map_err(err)
}

/// Substrings of `len` symbols sampled from `docs`, in surface form.
#[pyfunction]
#[pyo3(signature = (docs, len, count = 200, seed = 0, mode = "byte"))]
fn sample_patterns(docs: Vec<Vec<u8>>, len: usize, count: usize, seed: u64, mode: &str) -> PyResult<Vec<Vec<u8>>> {
    let c = Collection::from_docs(&docs, parse(mode)?).map_err(err)?;
    Ok(gen_patterns(&c, len, count, seed)
        .iter()
        .map(|p| succdoc::construct::render_symbols(c.mode(), c.vocab(), p))
        .collect())
}

#[pymodule]
fn pysuccdoc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIndex>()?;
    m.add_function(wrap_pyfunction!(synth_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(sample_patterns, m)?)?;
    Ok(())
}
