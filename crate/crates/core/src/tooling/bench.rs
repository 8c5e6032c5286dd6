//! Query timing and result reports.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use super::patterns::escape_pattern;
use crate::docindex::{DocIndex, DocumentIndex, Hit, Ranking};
use crate::error::Result;

/// Default number of results per query.
pub const DEFAULT_K: usize = 10;
/// Default per-query cutoff after which a length is reported as omitted.
pub const DEFAULT_CUTOFF: Duration = Duration::from_secs(5);

/// Timing summary for all patterns of one length.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub pattern_length: usize,
    pub count: usize,
    pub avg_us: f64,
    pub max_us: f64,
    pub omitted: bool,
}

/// Hits of one timed query, kept for cross-checking indexes.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchQuery {
    pub line: usize,
    pub hits: Vec<Hit>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub queries: Vec<BenchQuery>,
    /// One message per pattern that could not be mapped to the index alphabet.
    pub errors: Vec<String>,
}

impl BenchReport {
    pub fn write_tsv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "pattern_length\tcount\tavg_us\tmax_us\tomitted_flag")?;
        for r in &self.rows {
            writeln!(
                out,
                "{}\t{}\t{:.3}\t{:.3}\t{}",
                r.pattern_length, r.count, r.avg_us, r.max_us, r.omitted as u8
            )?;
        }
        Ok(())
    }
}

/// Times a top-k query for every pattern, grouped by pattern length in
/// symbols. A length is marked omitted when any of its queries took longer
/// than `cutoff`.
pub fn bench(index: &DocIndex, patterns: &[Vec<u8>], k: usize, ranking: Ranking, cutoff: Duration) -> BenchReport {
    let mut report = BenchReport::default();
    let mut groups: BTreeMap<usize, Vec<Duration>> = BTreeMap::new();
    for (line, raw) in patterns.iter().enumerate() {
        let Some(p) = index.map_pattern(raw) else {
            report.errors.push(format!(
                "line {}: pattern '{}' is outside the index alphabet",
                line + 1,
                escape_pattern(raw)
            ));
            continue;
        };
        let t = Instant::now();
        let hits = index.topk(&p, k, ranking);
        let elapsed = t.elapsed();
        groups.entry(p.len()).or_default().push(elapsed);
        report.queries.push(BenchQuery { line: line + 1, hits, elapsed });
    }
    for (len, times) in groups {
        let us = |d: &Duration| d.as_secs_f64() * 1e6;
        let total: f64 = times.iter().map(us).sum();
        let max = times.iter().map(us).fold(0.0, f64::max);
        report.rows.push(BenchRow {
            pattern_length: len,
            count: times.len(),
            avg_us: total / times.len() as f64,
            max_us: max,
            omitted: times.iter().any(|t| *t > cutoff),
        });
    }
    report
}

/// Writes the results TSV: pattern, rank, doc_id, tf, score.
pub fn write_results<W: Write>(out: &mut W, results: &[(Vec<u8>, Vec<Hit>)]) -> Result<()> {
    writeln!(out, "pattern\trank\tdoc_id\ttf\tscore")?;
    for (pattern, hits) in results {
        let p = escape_pattern(pattern);
        for (rank, h) in hits.iter().enumerate() {
            writeln!(out, "{p}\t{}\t{}\t{}\t{}", rank + 1, h.doc, h.tf, h.score)?;
        }
    }
    Ok(())
}
