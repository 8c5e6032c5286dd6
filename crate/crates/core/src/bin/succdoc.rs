use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use succdoc::construct::{Collection, Mode};
use succdoc::docindex::{build_index, Algo, BuildOptions, DocIndex, Ranking};
use succdoc::persist::Persist;
use succdoc::synth::{write_corpus, CorpusSpec};
use succdoc::tooling::bench::{bench, write_results, DEFAULT_K};
use succdoc::tooling::monitor::MemoryMonitor;
use succdoc::tooling::patterns::{gen_patterns, read_patterns, write_patterns, DEFAULT_PATTERN_COUNT};
use succdoc::{Error, Result};

#[derive(Parser)]
#[command(name = "succdoc", version, about = "Top-k document retrieval over succinct indexes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an index from a collection file.
    Build {
        #[arg(long, value_parser = parse_algo)]
        algo: Algo,
        #[arg(long, value_parser = parse_mode, default_value = "byte")]
        mode: Mode,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Document separator: a character, a decimal value or 0xHH.
        #[arg(long, value_parser = parse_sep, default_value = "0x0A")]
        sep: u8,
        #[arg(long)]
        sa_sample: Option<usize>,
        /// Keep intermediate files in <out>.tmp.
        #[arg(long)]
        keep_temp: bool,
        /// Write the construction memory report here.
        #[arg(long)]
        monitor: Option<PathBuf>,
    },
    /// Answer top-k queries for every pattern in a file.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        #[arg(short = 'k', default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, value_parser = parse_ranking, default_value = "freq")]
        ranking: Ranking,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample patterns of one length from a collection.
    GenPatterns {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = DEFAULT_PATTERN_COUNT)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_mode, default_value = "byte")]
        mode: Mode,
        #[arg(long, value_parser = parse_sep, default_value = "0x0A")]
        sep: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the size breakdown of an index as JSON and optionally HTML.
    SizeReport {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        json: PathBuf,
        #[arg(long)]
        html: Option<PathBuf>,
    },
    /// Time top-k queries grouped by pattern length.
    Bench {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        #[arg(short = 'k', default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, default_value_t = 5000)]
        cutoff_ms: u64,
        #[arg(long, value_parser = parse_ranking, default_value = "freq")]
        ranking: Ranking,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also log the hit list of every query here.
        #[arg(long)]
        hits: Option<PathBuf>,
    },
    /// Generate a synthetic collection file.
    GenCorpus {
        #[arg(long)]
        docs: usize,
        #[arg(long, default_value_t = 100)]
        avg_len: usize,
        #[arg(long, default_value_t = 4)]
        sigma: usize,
        #[arg(long, default_value_t = 1.0)]
        zipf: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_mode, default_value = "byte")]
        mode: Mode,
        /// Emit the two-document example collection instead.
        #[arg(long)]
        fixture: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_algo(s: &str) -> std::result::Result<Algo, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ranking(s: &str) -> std::result::Result<Ranking, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sep(s: &str) -> std::result::Result<u8, String> {
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        return u8::from_str_radix(hex, 16).map_err(|e| e.to_string());
    }
    match s {
        "\\n" => return Ok(b'\n'),
        "\\t" => return Ok(b'\t'),
        _ => {}
    }
    if let Ok(v) = s.parse::<u8>() {
        if s.len() > 1 {
            return Ok(v);
        }
    }
    match s.as_bytes() {
        [b] => Ok(*b),
        _ => Err(format!("separator '{s}' is not a single byte")),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Build { algo, mode, input, out, sep, sa_sample, keep_temp, monitor } => {
            let collection = Collection::read_file(&input, mode, sep)?;
            let mut opts = BuildOptions::new(algo);
            opts.sa_rate = sa_sample;
            if keep_temp {
                let mut dir = out.clone().into_os_string();
                dir.push(".tmp");
                opts.work_dir = Some(PathBuf::from(dir));
            }
            let mon = monitor.as_ref().map(|_| MemoryMonitor::start());
            let index = build_index(collection, &opts)?;
            if let (Some(mon), Some(path)) = (mon, monitor.as_ref()) {
                std::fs::write(path, mon.finish().to_json())?;
            }
            let tree = index.save_with_vocab(&out)?;
            log::info!("wrote {} ({} bytes)", out.display(), tree.size);
        }
        Cmd::Query { index, patterns, k, ranking, out } => {
            let index = DocIndex::load_with_vocab(&index)?;
            let mut results = Vec::new();
            for (line, p) in read_patterns(&patterns)?.into_iter().enumerate() {
                if index.map_pattern(&p).is_none() {
                    log::warn!("line {}: pattern outside the index alphabet", line + 1);
                }
                let hits = index.query(&p, k, ranking);
                results.push((p, hits));
            }
            let mut w = output(out.as_deref())?;
            write_results(&mut w, &results)?;
            w.flush()?;
        }
        Cmd::GenPatterns { input, len, count, seed, mode, sep, out } => {
            let collection = Collection::read_file(&input, mode, sep)?;
            let patterns = gen_patterns(&collection, len, count, seed);
            let mut w = output(out.as_deref())?;
            write_patterns(&mut w, &collection, &patterns)?;
            w.flush()?;
        }
        Cmd::SizeReport { index, json, html } => {
            let idx = DocIndex::load(&index)?;
            let name = index.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "index".into());
            let tree = idx.size_tree(&name)?;
            let on_disk = std::fs::metadata(&index)?.len();
            if tree.size != on_disk {
                return Err(Error::Format(format!("size tree total {} differs from file size {on_disk}", tree.size)));
            }
            std::fs::write(&json, tree.to_json())?;
            if let Some(h) = html {
                std::fs::write(h, tree.to_html(&name))?;
            }
        }
        Cmd::Bench { index, patterns, k, cutoff_ms, ranking, out, hits } => {
            let index = DocIndex::load_with_vocab(&index)?;
            let patterns = read_patterns(&patterns)?;
            let report = bench(&index, &patterns, k, ranking, Duration::from_millis(cutoff_ms));
            for e in &report.errors {
                eprintln!("{e}");
            }
            let mut w = output(out.as_deref())?;
            report.write_tsv(&mut w)?;
            w.flush()?;
            if let Some(path) = hits {
                let logged: Vec<(Vec<u8>, _)> =
                    report.queries.iter().map(|q| (patterns[q.line - 1].clone(), q.hits.clone())).collect();
                let mut w = output(Some(&path))?;
                write_results(&mut w, &logged)?;
                w.flush()?;
            }
        }
        Cmd::GenCorpus { docs, avg_len, sigma, zipf, seed, mode, fixture, out } => {
            let mut spec = if fixture { CorpusSpec::running_example() } else { CorpusSpec::new(docs, avg_len, sigma, zipf, seed) };
            spec.mode = mode;
            write_corpus(&spec, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
