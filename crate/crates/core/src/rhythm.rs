//! Rhythmic similarity of word pairs and its aggregation over clusterings.
//!
//! The pair score aligns two words at their final characters, counts the
//! positions (walking backwards) where the characters agree, and divides by
//! the longer word's length. It is deliberately sensitive to alignment: a
//! single extra trailing character shifts every comparison. The IPA variant
//! applies the same score to phonetic transcriptions from a user-supplied
//! lexicon.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// A rhythmic-similarity value in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RsScore(f64);

impl RsScore {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Counts matching characters aligned from the word endings, over the longer
/// word's length. Characters are compared as Unicode scalar values.
pub fn rs_basic(w1: &str, w2: &str) -> Result<RsScore> {
    if w1.is_empty() || w2.is_empty() {
        return Err(Error::Data(
            "rhythmic similarity of an empty word is undefined".into(),
        ));
    }
    let len1 = w1.chars().count();
    let len2 = w2.chars().count();
    let matches = w1
        .chars()
        .rev()
        .zip(w2.chars().rev())
        .filter(|(a, b)| a == b)
        .count();
    Ok(RsScore(matches as f64 / len1.max(len2) as f64))
}

/// Word-to-IPA lookup, loaded from a TSV file. Stress and syllable markers
/// are stripped so only segment characters take part in comparisons.
#[derive(Clone, Debug, Default)]
pub struct IpaLexicon {
    entries: HashMap<String, String>,
}

fn strip_ipa_markers(s: &str) -> String {
    s.chars().filter(|c| !matches!(c, 'ˈ' | 'ˌ' | '.')).collect()
}

impl IpaLexicon {
    pub fn new() -> Self {
        IpaLexicon::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, word: &str, ipa: &str) -> Result<()> {
        let ipa = strip_ipa_markers(ipa);
        if ipa.is_empty() {
            return Err(Error::Data(format!(
                "empty IPA transcription for word {word:?}"
            )));
        }
        self.entries.insert(word.to_string(), ipa);
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(|s| s.as_str())
    }

    /// Loads `word<TAB>ipa` lines. Duplicate words keep the last entry; the
    /// number of overwritten duplicates is returned so callers can warn.
    pub fn load<R: BufRead>(reader: R) -> Result<(IpaLexicon, usize)> {
        let mut lex = IpaLexicon::new();
        let mut duplicates = 0;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let (word, ipa) = line.split_once('\t').ok_or_else(|| {
                Error::Data(format!(
                    "IPA lexicon line {} has no tab separator",
                    lineno + 1
                ))
            })?;
            if lex.get(word).is_some() {
                duplicates += 1;
            }
            lex.insert(word, ipa)?;
        }
        Ok((lex, duplicates))
    }
}

/// The pair score applied to IPA transcriptions instead of spellings.
pub fn rs_ipa(w1: &str, w2: &str, lex: &IpaLexicon) -> Result<RsScore> {
    let t1 = lex
        .get(w1)
        .ok_or_else(|| Error::MissingTranscription { word: w1.to_string() })?;
    let t2 = lex
        .get(w2)
        .ok_or_else(|| Error::MissingTranscription { word: w2.to_string() })?;
    rs_basic(t1, t2)
}

/// Mean pair score of one cluster.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterMean {
    pub score: RsScore,
    pub n_pairs: u64,
    /// False for empty and singleton clusters, which have no pairs and are
    /// left out of the corpus mean.
    pub included: bool,
}

/// Averages the metric over all unordered pairs of the cluster's words.
pub fn cluster_mean_rs<S, F>(words: &[S], mut metric: F) -> Result<ClusterMean>
where
    S: AsRef<str>,
    F: FnMut(&str, &str) -> Result<RsScore>,
{
    let n = words.len();
    if n < 2 {
        return Ok(ClusterMean {
            score: RsScore(0.0),
            n_pairs: 0,
            included: false,
        });
    }
    let mut sum = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            sum += metric(words[i].as_ref(), words[j].as_ref())?.value();
        }
    }
    let n_pairs = (n as u64) * (n as u64 - 1) / 2;
    Ok(ClusterMean {
        score: RsScore(sum / n_pairs as f64),
        n_pairs,
        included: true,
    })
}

/// Per-cluster score as persisted and reported.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterScore {
    pub cluster: usize,
    pub n_words: usize,
    pub n_pairs: u64,
    /// Mean pair score in [0, 1]; 0 for excluded clusters.
    pub mean_rs: f64,
    pub included: bool,
}

/// Unweighted mean over the included (non-singleton) clusters.
pub fn corpus_mean_rs(per_cluster: &[ClusterScore]) -> Result<f64> {
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for c in per_cluster {
        if c.included {
            sum += c.mean_rs;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Degenerate(
            "every cluster is empty or a singleton; the corpus mean is undefined".into(),
        ));
    }
    Ok(sum / count as f64)
}

/// Which pair metric to aggregate.
pub enum RsMetric<'a> {
    Basic,
    /// IPA transcriptions, optionally falling back to spellings for words
    /// missing from the lexicon. The fallback rate is recorded.
    Ipa {
        lexicon: &'a IpaLexicon,
        fallback: bool,
    },
}

/// Scores of every cluster of one clustering, plus the corpus mean.
#[derive(Clone, Debug)]
pub struct ClusterRsSummary {
    pub per_cluster: Vec<ClusterScore>,
    pub corpus_mean: f64,
    pub included_clusters: usize,
    pub excluded_clusters: usize,
    /// Fraction of scored pairs that fell back to spellings, when the IPA
    /// metric with fallback was used.
    pub fallback_rate: Option<f64>,
}

/// Applies the metric to every cluster of the partition, in cluster-index
/// order, and takes the corpus mean over the included ones.
pub fn score_clustering(
    clustering: &Clustering,
    words: &[String],
    metric: &RsMetric,
) -> Result<ClusterRsSummary> {
    if words.len() != clustering.len() {
        return Err(Error::Internal(format!(
            "{} words for a clustering of {} words",
            words.len(),
            clustering.len()
        )));
    }

    let mut fallback_pairs = 0u64;
    let mut total_pairs = 0u64;
    let mut per_cluster = Vec::with_capacity(clustering.k());

    for c in 0..clustering.k() {
        let member_words: Vec<&str> = clustering
            .members(c)
            .iter()
            .map(|&id| words[id as usize].as_str())
            .collect();

        let mean = match metric {
            RsMetric::Basic => cluster_mean_rs(&member_words, rs_basic)?,
            RsMetric::Ipa { lexicon, fallback } => {
                cluster_mean_rs(&member_words, |a, b| match rs_ipa(a, b, lexicon) {
                    Ok(score) => Ok(score),
                    Err(Error::MissingTranscription { .. }) if *fallback => {
                        fallback_pairs += 1;
                        rs_basic(a, b)
                    }
                    Err(e) => Err(e),
                })?
            }
        };
        total_pairs += mean.n_pairs;
        per_cluster.push(ClusterScore {
            cluster: c,
            n_words: member_words.len(),
            n_pairs: mean.n_pairs,
            mean_rs: mean.score.value(),
            included: mean.included,
        });
    }

    let corpus_mean = corpus_mean_rs(&per_cluster)?;
    let included = per_cluster.iter().filter(|c| c.included).count();
    let uses_fallback = matches!(metric, RsMetric::Ipa { fallback: true, .. });

    Ok(ClusterRsSummary {
        corpus_mean,
        included_clusters: included,
        excluded_clusters: per_cluster.len() - included,
        fallback_rate: if uses_fallback && total_pairs > 0 {
            Some(fallback_pairs as f64 / total_pairs as f64)
        } else {
            None
        },
        per_cluster,
    })
}

/// Writes per-cluster scores as CSV: `cluster_index,n_words,n_pairs,mean_rs_percent`.
/// Metadata such as the IPA fallback rate rides along as `# key = value`
/// comment lines before the header.
pub fn write_scores_csv<W: Write>(summary: &ClusterRsSummary, out: &mut W) -> Result<()> {
    if let Some(rate) = summary.fallback_rate {
        writeln!(out, "# ipa_fallback_rate = {rate}")?;
    }
    writeln!(out, "cluster_index,n_words,n_pairs,mean_rs_percent")?;
    for c in &summary.per_cluster {
        writeln!(
            out,
            "{},{},{},{}",
            c.cluster,
            c.n_words,
            c.n_pairs,
            c.mean_rs * 100.0
        )?;
    }
    Ok(())
}

/// Reads the CSV form back, recomputing the corpus mean from the persisted
/// per-cluster values.
pub fn read_scores_csv<R: BufRead>(reader: R) -> Result<ClusterRsSummary> {
    let mut per_cluster = Vec::new();
    let mut fallback_rate = None;
    let mut seen_header = false;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "ipa_fallback_rate" {
                    fallback_rate = Some(value.trim().parse().map_err(|_| {
                        Error::Data(format!("bad fallback rate on line {}", lineno + 1))
                    })?);
                }
            }
            continue;
        }
        if !seen_header {
            if line != "cluster_index,n_words,n_pairs,mean_rs_percent" {
                return Err(Error::Data(format!(
                    "unexpected scores header {line:?}"
                )));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Data(format!(
                "malformed scores row on line {}",
                lineno + 1
            )));
        }
        let parse_err =
            |what: &str| Error::Data(format!("bad {what} on line {}", lineno + 1));
        let cluster: usize = fields[0].parse().map_err(|_| parse_err("cluster index"))?;
        let n_words: usize = fields[1].parse().map_err(|_| parse_err("word count"))?;
        let n_pairs: u64 = fields[2].parse().map_err(|_| parse_err("pair count"))?;
        let percent: f64 = fields[3].parse().map_err(|_| parse_err("mean"))?;
        per_cluster.push(ClusterScore {
            cluster,
            n_words,
            n_pairs,
            mean_rs: percent / 100.0,
            included: n_pairs > 0,
        });
    }

    if per_cluster.is_empty() {
        return Err(Error::Data("scores file has no clusters".into()));
    }
    let corpus_mean = corpus_mean_rs(&per_cluster)?;
    let included = per_cluster.iter().filter(|c| c.included).count();
    Ok(ClusterRsSummary {
        corpus_mean,
        included_clusters: included,
        excluded_clusters: per_cluster.len() - included,
        fallback_rate,
        per_cluster,
    })
}
