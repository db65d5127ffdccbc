//! The end-to-end experiment: ingest each corpus, train the selected
//! embedding methods, cluster, draw the size-matched random baseline, score
//! everything with the pair metric, and emit the comparison report. Every
//! intermediate artifact is persisted so each stage can also be re-run
//! standalone from files.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rhymevec::clustering::{kmeans_cosine, random_clustering, Clustering, Provenance};
use rhymevec::corpus::{
    build_vocabulary, corpus_stats, read_corpus_text, tokenize, CorpusStats, TokenCorpus,
    TokenizerConfig, Vocabulary,
};
use rhymevec::embedding::{build_cooccurrence, train_glove, train_word2vec, EmbeddingMatrix, Method};
use rhymevec::error::{Error, Result};
use rhymevec::report::{build_report, ComparisonReport, EvaluatedRun};
use rhymevec::rhythm::{score_clustering, write_scores_csv, ClusterRsSummary, IpaLexicon, RsMetric};

use crate::config::PipelineConfig;

/// A corpus read, tokenized, and encoded against its vocabulary.
pub struct IngestedCorpus {
    pub name: String,
    pub vocab: Vocabulary,
    pub corpus: TokenCorpus,
    pub stats: CorpusStats,
}

pub fn corpus_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string())
}

pub fn ingest_corpus(path: &Path, sentence_breaks: bool, min_count: u64) -> Result<IngestedCorpus> {
    let text = read_corpus_text(path)?;
    let tokenized = tokenize(&text, &TokenizerConfig { sentence_breaks });
    let vocab = build_vocabulary(&tokenized.tokens, min_count);
    let corpus = TokenCorpus::encode(&tokenized, &vocab);
    let stats = corpus_stats(&corpus, &vocab);
    Ok(IngestedCorpus {
        name: corpus_name(path),
        vocab,
        corpus,
        stats,
    })
}

/// One Table-1-style CSV row: name, token count, unique words, average word
/// length to two decimals.
pub fn stats_csv_row(name: &str, stats: &CorpusStats) -> String {
    format!(
        "{},{},{},{:.2}",
        name, stats.total_tokens, stats.unique_words, stats.avg_word_length
    )
}

/// Trains one method over an ingested corpus.
pub fn train_method(
    method: Method,
    ingested: &IngestedCorpus,
    cfg: &rhymevec::embedding::TrainConfig,
    seed: u64,
) -> Result<EmbeddingMatrix> {
    match method {
        Method::Word2Vec => train_word2vec(&ingested.corpus, &ingested.vocab, cfg, seed),
        Method::Glove => {
            let table = build_cooccurrence(&ingested.corpus, &ingested.vocab, cfg.window);
            let (matrix, _stats) = train_glove(&table, cfg, seed)?;
            Ok(matrix)
        }
    }
}

pub fn load_ipa_lexicon(path: &Path) -> Result<IpaLexicon> {
    let file = fs::File::open(path)?;
    let (lexicon, duplicates) = IpaLexicon::load(BufReader::new(file))?;
    if duplicates > 0 {
        eprintln!(
            "warning: {duplicates} duplicate IPA entries in {}; last occurrence wins",
            path.display()
        );
    }
    Ok(lexicon)
}

fn write_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<fs::File>) -> Result<()>,
{
    let mut out = BufWriter::new(fs::File::create(path)?);
    write(&mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes summary.csv, the per-row histogram CSVs, and report.txt.
pub fn write_report_files(report: &ComparisonReport, out_dir: &Path) -> Result<()> {
    write_file(&out_dir.join("summary.csv"), |out| {
        report.write_summary_csv(out)
    })?;
    for (i, row) in report.rows.iter().enumerate() {
        let name = format!("hist_{}_{}.csv", row.corpus, row.method);
        write_file(&out_dir.join(name), |out| report.write_hist_csv(i, out))?;
    }
    write_file(&out_dir.join("report.txt"), |out| {
        report.write_report_txt(out)
    })?;
    Ok(())
}

fn score_metric<'a>(lexicon: &'a Option<IpaLexicon>) -> RsMetric<'a> {
    match lexicon {
        Some(lex) => RsMetric::Ipa {
            lexicon: lex,
            fallback: true,
        },
        None => RsMetric::Basic,
    }
}

struct StagedError(&'static str, Error);

fn staged<T>(stage: &'static str, r: Result<T>) -> std::result::Result<T, StagedError> {
    r.map_err(|e| StagedError(stage, e))
}

/// Runs the whole experiment. On failure, partial outputs are kept and a
/// FAILED marker naming the stage is written into the output directory.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<ComparisonReport> {
    let mut cfg = cfg.clone();
    cfg.validate()?;
    cfg.resolve_seeds();
    fs::create_dir_all(&cfg.out_dir)?;
    let failed_marker = cfg.out_dir.join("FAILED");
    let _ = fs::remove_file(&failed_marker);

    match run_stages(&cfg) {
        Ok(report) => Ok(report),
        Err(StagedError(stage, err)) => {
            let body = format!("stage = {stage}\nerror = {err}\n");
            let _ = fs::write(&failed_marker, body);
            Err(err)
        }
    }
}

fn run_stages(cfg: &PipelineConfig) -> std::result::Result<ComparisonReport, StagedError> {
    let out_dir = &cfg.out_dir;
    let seed_embedding = cfg.seed_embedding.expect("seeds resolved");
    let seed_clustering = cfg.seed_clustering.expect("seeds resolved");
    let seed_baseline = cfg.seed_baseline.expect("seeds resolved");

    let lexicon = match &cfg.ipa_lexicon {
        Some(path) => Some(staged("evaluate", load_ipa_lexicon(path))?),
        None => None,
    };

    let mut stats_rows: Vec<String> = Vec::new();
    let mut runs: Vec<EvaluatedRun> = Vec::new();
    let mut seen_names: Vec<String> = Vec::new();

    for corpus_path in &cfg.corpora {
        let ingested = staged(
            "stats",
            ingest_corpus(corpus_path, cfg.sentence_breaks, cfg.train.min_count),
        )?;
        if seen_names.contains(&ingested.name) {
            return Err(StagedError(
                "stats",
                Error::Config(format!(
                    "two corpus files share the name {:?}; rename one",
                    ingested.name
                )),
            ));
        }
        seen_names.push(ingested.name.clone());
        stats_rows.push(stats_csv_row(&ingested.name, &ingested.stats));
        // Rewritten per corpus so the rows survive a later-stage failure.
        staged(
            "stats",
            write_file(&out_dir.join("stats.csv"), |out| {
                writeln!(out, "name,total_tokens,unique_words,avg_word_length")?;
                for row in &stats_rows {
                    writeln!(out, "{row}")?;
                }
                Ok(())
            }),
        )?;

        // Train every selected method.
        let mut embeddings: Vec<(Method, EmbeddingMatrix)> = Vec::new();
        for &method in &cfg.methods {
            let matrix = staged(
                "train",
                train_method(method, &ingested, &cfg.train, seed_embedding),
            )?;
            let path = out_dir.join(format!(
                "embeddings_{}_{}.txt",
                ingested.name,
                method.as_str()
            ));
            staged(
                "train",
                write_file(&path, |out| matrix.write_text(ingested.vocab.words(), out)),
            )?;
            embeddings.push((method, matrix));
        }

        // Cluster each embedding.
        let mut clusterings: Vec<(String, Clustering)> = Vec::new();
        for (method, matrix) in &embeddings {
            let outcome = staged(
                "cluster",
                kmeans_cosine(
                    matrix,
                    ingested.vocab.words(),
                    cfg.k,
                    cfg.max_iters,
                    seed_clustering,
                    cfg.train.threads,
                ),
            )?;
            let path = out_dir.join(format!(
                "clusters_{}_{}.csv",
                ingested.name,
                method.as_str()
            ));
            staged(
                "cluster",
                write_file(&path, |out| {
                    outcome.clustering.write_csv(ingested.vocab.words(), out)
                }),
            )?;
            clusterings.push((method.as_str().to_string(), outcome.clustering));
        }

        // Size-matched random baseline, using the first method's profile.
        let profile = clusterings[0].1.size_profile();
        let baseline = staged(
            "baseline",
            random_clustering(ingested.vocab.len(), &profile, seed_baseline),
        )?;
        let path = out_dir.join(format!("clusters_{}_random.csv", ingested.name));
        staged(
            "baseline",
            write_file(&path, |out| baseline.write_csv(ingested.vocab.words(), out)),
        )?;
        clusterings.push(("random".to_string(), baseline));

        // Score every partition.
        for (label, clustering) in &clusterings {
            let summary: ClusterRsSummary = staged(
                "evaluate",
                score_clustering(clustering, ingested.vocab.words(), &score_metric(&lexicon)),
            )?;
            let path = out_dir.join(format!("scores_{}_{}.csv", ingested.name, label));
            staged(
                "evaluate",
                write_file(&path, |out| write_scores_csv(&summary, out)),
            )?;
            runs.push(EvaluatedRun {
                corpus: ingested.name.clone(),
                method: label.clone(),
                summary,
            });
        }
    }

    let report = staged("report", build_report(&runs, cfg.echo()))?;
    staged("report", write_report_files(&report, out_dir))?;
    Ok(report)
}

/// Re-reads a persisted clustering CSV (words in id order plus the partition).
pub fn read_clustering_file(path: &Path) -> Result<(Vec<String>, Clustering)> {
    let file = fs::File::open(path)?;
    Clustering::read_csv(BufReader::new(file), Provenance::EmbeddingBased)
}
