#![allow(dead_code)]

//! Shared fixtures and parsers for the CLI integration tests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rhymevec_cli::fixture::{generate_poetry_corpus, CorpusSpec};

pub fn target_tmp() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
}

/// The ~150k-token poetry fixture, generated once per test binary.
pub fn fixture_corpus() -> &'static Path {
    static CORPUS: OnceLock<PathBuf> = OnceLock::new();
    CORPUS
        .get_or_init(|| {
            let path = target_tmp().join("poems.txt");
            let text = generate_poetry_corpus(&CorpusSpec {
                tokens: 150_000,
                seed: 1,
            });
            fs::write(&path, text).expect("write fixture corpus");
            path
        })
        .as_path()
}

/// A small corpus for smoke tests, written into `dir` as `tiny.txt`.
pub fn write_tiny_corpus(dir: &Path) -> PathBuf {
    let path = dir.join("tiny.txt");
    let text = generate_poetry_corpus(&CorpusSpec {
        tokens: 1200,
        seed: 7,
    });
    fs::write(&path, text).expect("write tiny corpus");
    path
}

#[derive(Clone, Debug)]
pub struct SummaryRow {
    pub corpus: String,
    pub method: String,
    pub mean_rs_percent: f64,
    pub included_clusters: u64,
    pub excluded_clusters: u64,
    pub clusters_over: [u64; 4],
    pub ipa_fallback_rate: Option<f64>,
}

pub fn read_summary(path: &Path) -> Vec<SummaryRow> {
    let text = fs::read_to_string(path).expect("read summary.csv");
    let mut rows = Vec::new();
    for line in text.lines().skip(1) {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 10, "unexpected summary row: {line}");
        rows.push(SummaryRow {
            corpus: f[0].to_string(),
            method: f[1].to_string(),
            mean_rs_percent: f[2].parse().unwrap(),
            included_clusters: f[3].parse().unwrap(),
            excluded_clusters: f[4].parse().unwrap(),
            clusters_over: [
                f[5].parse().unwrap(),
                f[6].parse().unwrap(),
                f[7].parse().unwrap(),
                f[8].parse().unwrap(),
            ],
            ipa_fallback_rate: if f[9].is_empty() {
                None
            } else {
                Some(f[9].parse().unwrap())
            },
        });
    }
    rows
}

pub fn summary_row<'a>(rows: &'a [SummaryRow], method: &str) -> &'a SummaryRow {
    rows.iter()
        .find(|r| r.method == method)
        .unwrap_or_else(|| panic!("no {method} row in summary"))
}

/// All `key = value` pairs from report.txt, both the plain config lines and
/// the `# result.*` comment lines.
pub fn read_report_pairs(path: &Path) -> BTreeMap<String, String> {
    let text = fs::read_to_string(path).expect("read report.txt");
    let mut pairs = BTreeMap::new();
    for line in text.lines() {
        let line = line.strip_prefix("# ").unwrap_or(line);
        if let Some((k, v)) = line.split_once(" = ") {
            pairs.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    pairs
}

/// Histogram CSV -> (bin lower bounds, counts).
pub fn read_hist(path: &Path) -> Vec<(u32, u64)> {
    let text = fs::read_to_string(path).expect("read histogram csv");
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (b, c) = l.split_once(',').expect("bin,count");
            (b.parse().unwrap(), c.parse().unwrap())
        })
        .collect()
}

/// Byte-for-byte snapshot of every file in a directory (non-recursive).
pub fn dir_snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut snapshot = BTreeMap::new();
    for entry in fs::read_dir(dir).expect("read out dir") {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            let name = entry.file_name().to_string_lossy().into_owned();
            snapshot.insert(name, fs::read(entry.path()).unwrap());
        }
    }
    snapshot
}

pub fn rhymevec_bin() -> &'static str {
    env!("CARGO_BIN_EXE_rhymevec")
}
