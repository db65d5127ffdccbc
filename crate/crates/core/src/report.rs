//! Aggregation of per-clustering scores into the summary table, the 100-bin
//! histograms, and a reproducibility echo of the full configuration.

use std::io::Write;

use crate::error::{Error, Result};
use crate::rhythm::ClusterRsSummary;

pub const HIST_BINS: usize = 100;

/// Thresholds (in percent) for the "clusters scoring above X" counts.
pub const RS_THRESHOLDS: [f64; 4] = [10.0, 15.0, 25.0, 50.0];

/// Counts of clusters per integer percent of mean RS: bin i covers [i, i+1),
/// with 100 clamped into the last bin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsHistogram {
    bins: Vec<u64>,
    total: u64,
}

impl RsHistogram {
    pub fn bins(&self) -> &[u64] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn bin(&self, i: usize) -> u64 {
        self.bins[i]
    }
}

/// Bins per-cluster mean-RS percents.
pub fn build_histogram(scores_percent: &[f64]) -> Result<RsHistogram> {
    let mut bins = vec![0u64; HIST_BINS];
    for &s in scores_percent {
        if !(0.0..=100.0).contains(&s) {
            return Err(Error::Internal(format!(
                "cluster mean {s} percent is outside [0, 100]"
            )));
        }
        let bin = (s.floor() as usize).min(HIST_BINS - 1);
        bins[bin] += 1;
    }
    Ok(RsHistogram {
        bins,
        total: scores_percent.len() as u64,
    })
}

/// One evaluated clustering, ready for reporting.
#[derive(Clone, Debug)]
pub struct EvaluatedRun {
    pub corpus: String,
    pub method: String,
    pub summary: ClusterRsSummary,
}

impl EvaluatedRun {
    /// Number of vocabulary words covered by the clustering; rows of one
    /// corpus must agree on this.
    fn vocab_words(&self) -> usize {
        self.summary.per_cluster.iter().map(|c| c.n_words).sum()
    }

    fn included_percents(&self) -> Vec<f64> {
        self.summary
            .per_cluster
            .iter()
            .filter(|c| c.included)
            .map(|c| c.mean_rs * 100.0)
            .collect()
    }
}

/// One row of the summary table.
#[derive(Clone, Debug)]
pub struct ReportRow {
    pub corpus: String,
    pub method: String,
    pub mean_rs_percent: f64,
    pub included_clusters: usize,
    pub excluded_clusters: usize,
    /// Clusters whose mean exceeds each of `RS_THRESHOLDS` percent.
    pub clusters_over: [u64; 4],
    pub fallback_rate: Option<f64>,
}

/// The full comparison: one row and one histogram per (corpus, method), plus
/// the configuration echo that makes the run reproducible.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub rows: Vec<ReportRow>,
    pub histograms: Vec<RsHistogram>,
    pub config_echo: Vec<(String, String)>,
}

pub fn build_report(
    runs: &[EvaluatedRun],
    config_echo: Vec<(String, String)>,
) -> Result<ComparisonReport> {
    if runs.is_empty() {
        return Err(Error::Config("no evaluated runs to report".into()));
    }
    for r in runs {
        for other in runs {
            if r.corpus == other.corpus && r.vocab_words() != other.vocab_words() {
                return Err(Error::Config(format!(
                    "rows for corpus {:?} cover different vocabularies ({} vs {} words)",
                    r.corpus,
                    r.vocab_words(),
                    other.vocab_words()
                )));
            }
        }
    }

    let mut rows = Vec::with_capacity(runs.len());
    let mut histograms = Vec::with_capacity(runs.len());
    for run in runs {
        let percents = run.included_percents();
        let mut clusters_over = [0u64; 4];
        for (slot, threshold) in clusters_over.iter_mut().zip(RS_THRESHOLDS) {
            *slot = percents.iter().filter(|&&p| p > threshold).count() as u64;
        }
        histograms.push(build_histogram(&percents)?);
        rows.push(ReportRow {
            corpus: run.corpus.clone(),
            method: run.method.clone(),
            mean_rs_percent: run.summary.corpus_mean * 100.0,
            included_clusters: run.summary.included_clusters,
            excluded_clusters: run.summary.excluded_clusters,
            clusters_over,
            fallback_rate: run.summary.fallback_rate,
        });
    }

    Ok(ComparisonReport {
        rows,
        histograms,
        config_echo,
    })
}

impl ComparisonReport {
    /// Summary table, means to two decimals.
    pub fn write_summary_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(
            out,
            "corpus,method,mean_rs_percent,included_clusters,excluded_clusters,\
             clusters_over_10pct,clusters_over_15pct,clusters_over_25pct,clusters_over_50pct,\
             ipa_fallback_rate"
        )?;
        for row in &self.rows {
            let fallback = row
                .fallback_rate
                .map(|r| format!("{r:.4}"))
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{:.2},{},{},{},{},{},{},{}",
                row.corpus,
                row.method,
                row.mean_rs_percent,
                row.included_clusters,
                row.excluded_clusters,
                row.clusters_over[0],
                row.clusters_over[1],
                row.clusters_over[2],
                row.clusters_over[3],
                fallback
            )?;
        }
        Ok(())
    }

    /// Plot-ready histogram for one row: `bin_lower_percent,count`, 100 rows.
    pub fn write_hist_csv<W: Write>(&self, row: usize, out: &mut W) -> Result<()> {
        writeln!(out, "bin_lower_percent,count")?;
        for (i, count) in self.histograms[row].bins().iter().enumerate() {
            writeln!(out, "{i},{count}")?;
        }
        Ok(())
    }

    /// The structured report: `key = value` configuration lines (directly
    /// reusable as a config file) followed by result lines as comments.
    pub fn write_report_txt<W: Write>(&self, out: &mut W) -> Result<()> {
        for (key, value) in &self.config_echo {
            writeln!(out, "{key} = {value}")?;
        }
        writeln!(out)?;
        for (row, hist) in self.rows.iter().zip(&self.histograms) {
            let prefix = format!("# result.{}.{}", row.corpus, row.method);
            writeln!(out, "{prefix}.mean_rs_percent = {}", row.mean_rs_percent)?;
            writeln!(out, "{prefix}.included_clusters = {}", row.included_clusters)?;
            writeln!(out, "{prefix}.excluded_clusters = {}", row.excluded_clusters)?;
            for (threshold, count) in RS_THRESHOLDS.iter().zip(row.clusters_over) {
                writeln!(out, "{prefix}.clusters_over_{threshold}pct = {count}")?;
            }
            if let Some(rate) = row.fallback_rate {
                writeln!(out, "{prefix}.ipa_fallback_rate = {rate}")?;
            }
            writeln!(out, "{prefix}.histogram_total = {}", hist.total())?;
        }
        Ok(())
    }
}
