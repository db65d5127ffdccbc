use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use rhymevec::clustering::{kmeans_cosine, random_clustering};
use rhymevec::embedding::{
    build_cooccurrence, train_glove, train_word2vec, CooccurrenceTable, EmbeddingMatrix, Method,
    TrainConfig, Word2VecMode,
};
use rhymevec::error::{Error, Result};
use rhymevec::report::{build_report, EvaluatedRun};
use rhymevec::rhythm::{read_scores_csv, score_clustering, write_scores_csv, RsMetric};

use rhymevec_cli::config::{entropy_seed, ConfigOverrides, PipelineConfig};
use rhymevec_cli::fixture::{generate_poetry_corpus, CorpusSpec};
use rhymevec_cli::pipeline::{
    ingest_corpus, load_ipa_lexicon, read_clustering_file, run_pipeline, stats_csv_row,
    write_report_files,
};

/// Tests whether word-embedding geometry captures rhythmic similarity:
/// trains Word2Vec- and GloVe-style embeddings, clusters them by cosine,
/// scores intra-cluster rhythmic similarity, and compares against a
/// size-matched random baseline.
#[derive(Parser)]
#[command(name = "rhymevec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print corpus statistics as a CSV row: name,total_tokens,unique_words,avg_word_length.
    Stats(StatsArgs),
    /// Train one embedding method and write word vectors in text format.
    Train(TrainArgs),
    /// Cluster an embedding file with spherical k-means, or derive a
    /// size-matched random partition from an existing clustering.
    Cluster(ClusterArgs),
    /// Score a persisted clustering: per-cluster mean rhythmic similarity.
    Evaluate(EvaluateArgs),
    /// Build summary.csv, histograms, and report.txt from per-cluster score files.
    Report(ReportArgs),
    /// Run the whole pipeline: stats, train, cluster, baseline, evaluate, report.
    Run(RunArgs),
    /// Generate a synthetic English-like poetry corpus (for trying the pipeline).
    GenCorpus(GenCorpusArgs),
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<Word2VecMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone)]
struct MethodList(Vec<Method>);

fn parse_methods_arg(s: &str) -> std::result::Result<MethodList, String> {
    s.split(',')
        .map(|p| parse_method(p.trim()))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(MethodList)
}

#[derive(Args)]
struct StatsArgs {
    /// Corpus file (plain UTF-8 text).
    #[arg(long = "in")]
    input: PathBuf,
    /// Name for the CSV row; defaults to the file stem.
    #[arg(long)]
    name: Option<String>,
    /// Discard words occurring fewer times than this.
    #[arg(long, default_value_t = 1)]
    min_count: u64,
    /// Record sentence boundaries at '.', '!', '?' and newlines.
    #[arg(long)]
    sentence_breaks: bool,
}

#[derive(Args)]
struct TrainArgs {
    /// Corpus file (plain UTF-8 text).
    #[arg(long = "in")]
    input: PathBuf,
    /// Embedding method: word2vec or glove.
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Output file for the word vectors (text format).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 15)]
    window: usize,
    #[arg(long, default_value_t = 1)]
    min_count: u64,
    /// Training seed; drawn from system entropy (and echoed) when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 1 is the deterministic mode.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// word2vec mode: cbow or skipgram.
    #[arg(long, value_parser = parse_mode, default_value = "cbow")]
    mode: Word2VecMode,
    /// word2vec negative samples per target.
    #[arg(long, default_value_t = 5)]
    negative: usize,
    /// word2vec training epochs.
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    /// word2vec initial learning rate.
    #[arg(long, default_value_t = 0.025)]
    alpha: f64,
    /// word2vec final learning rate.
    #[arg(long, default_value_t = 1e-4)]
    min_alpha: f64,
    /// word2vec frequency subsampling threshold (0 disables).
    #[arg(long, default_value_t = 1e-3)]
    subsample: f64,
    /// GloVe weighting cutoff.
    #[arg(long, default_value_t = 10.0)]
    x_max: f64,
    /// GloVe weighting exponent.
    #[arg(long, default_value_t = 0.75)]
    glove_alpha: f64,
    /// GloVe training iterations.
    #[arg(long, default_value_t = 15)]
    glove_iters: usize,
    /// GloVe adaptive-gradient learning rate.
    #[arg(long, default_value_t = 0.05)]
    glove_eta: f64,
    #[arg(long)]
    sentence_breaks: bool,
    /// Persist the co-occurrence table as binary triples (GloVe only).
    #[arg(long)]
    save_cooc: Option<PathBuf>,
    /// Reuse a persisted co-occurrence table instead of rebuilding (GloVe
    /// only; must come from the same corpus and min_count).
    #[arg(long)]
    cooc_in: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    /// Embedding file (text format) to cluster.
    #[arg(long = "in", required_unless_present = "random_baseline_of")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Seed for initialization (or for the random baseline).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Output clustering CSV.
    #[arg(long)]
    out: PathBuf,
    /// Emit a size-matched random partition of this clustering instead of
    /// running k-means.
    #[arg(long)]
    random_baseline_of: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Clustering CSV (word,cluster_index).
    #[arg(long)]
    clusters: PathBuf,
    /// Output per-cluster scores CSV.
    #[arg(long)]
    out: PathBuf,
    /// IPA lexicon (TSV: word<TAB>ipa); when given, pairs are scored on
    /// transcriptions, falling back to spellings for missing words.
    #[arg(long)]
    ipa_lexicon: Option<PathBuf>,
    /// Fail on words missing from the IPA lexicon instead of falling back.
    #[arg(long)]
    strict_ipa: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Corpus name for the report rows.
    #[arg(long)]
    corpus: String,
    /// Per-cluster score files, as method=path (repeatable), e.g.
    /// --scores word2vec=scores_w2v.csv --scores random=scores_rand.csv
    #[arg(long = "scores", required = true)]
    scores: Vec<String>,
    /// Directory for summary.csv, hist_*.csv and report.txt.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Optional key = value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Corpus files (repeatable).
    #[arg(long = "corpus")]
    corpora: Vec<PathBuf>,
    /// Comma-separated methods to train: word2vec,glove.
    #[arg(long, value_parser = parse_methods_arg)]
    methods: Option<MethodList>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    min_count: Option<u64>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Word2VecMode>,
    #[arg(long)]
    negative: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    min_alpha: Option<f64>,
    #[arg(long)]
    subsample: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    glove_alpha: Option<f64>,
    #[arg(long)]
    glove_iters: Option<usize>,
    #[arg(long)]
    glove_eta: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    sentence_breaks: bool,
    /// Worker threads for training and clustering; 1 is fully deterministic.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed_embedding: Option<u64>,
    #[arg(long)]
    seed_clustering: Option<u64>,
    #[arg(long)]
    seed_baseline: Option<u64>,
    #[arg(long)]
    ipa_lexicon: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct GenCorpusArgs {
    /// Approximate token count.
    #[arg(long, default_value_t = 150_000)]
    tokens: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output text file.
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            Error::Config(_) => 2,
            Error::Internal(_) => 4,
            _ => 3,
        });
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Train(args) => cmd_train(args),
        Command::Cluster(args) => cmd_cluster(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Report(args) => cmd_report(args),
        Command::Run(args) => cmd_run(args),
        Command::GenCorpus(args) => cmd_gen_corpus(args),
    }
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let ingested = ingest_corpus(&args.input, args.sentence_breaks, args.min_count)?;
    let name = args.name.unwrap_or(ingested.name);
    println!("{}", stats_csv_row(&name, &ingested.stats));
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let seed = args.seed.unwrap_or_else(entropy_seed);
    if args.seed.is_none() {
        eprintln!("seed = {seed}");
    }
    let cfg = TrainConfig {
        dim: args.dim,
        window: args.window,
        min_count: args.min_count,
        threads: args.threads,
        mode: args.mode,
        epochs: args.epochs,
        initial_alpha: args.alpha,
        min_alpha: args.min_alpha,
        negative: args.negative,
        subsample: args.subsample,
        glove_iters: args.glove_iters,
        glove_eta: args.glove_eta,
        glove_x_max: args.x_max,
        glove_alpha: args.glove_alpha,
    };
    cfg.validate()?;

    let ingested = ingest_corpus(&args.input, args.sentence_breaks, args.min_count)?;
    let matrix = match args.method {
        Method::Word2Vec => train_word2vec(&ingested.corpus, &ingested.vocab, &cfg, seed)?,
        Method::Glove => {
            let table = match &args.cooc_in {
                Some(path) => {
                    let mut reader = BufReader::new(fs::File::open(path)?);
                    CooccurrenceTable::read_binary(&mut reader)?
                }
                None => build_cooccurrence(&ingested.corpus, &ingested.vocab, cfg.window),
            };
            if let Some(path) = &args.save_cooc {
                let mut out = BufWriter::new(fs::File::create(path)?);
                table.write_binary(&mut out)?;
                out.flush()?;
            }
            if table.vocab_size() > ingested.vocab.len() {
                return Err(Error::Data(format!(
                    "co-occurrence table covers {} ids but the corpus vocabulary has {} words",
                    table.vocab_size(),
                    ingested.vocab.len()
                )));
            }
            let (matrix, stats) = train_glove(&table, &cfg, seed)?;
            for (i, loss) in stats.iteration_loss.iter().enumerate() {
                eprintln!("iteration {:>3}: loss {loss:.6}", i + 1);
            }
            matrix
        }
    };

    let mut out = BufWriter::new(fs::File::create(&args.out)?);
    matrix.write_text(ingested.vocab.words(), &mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_cluster(args: ClusterArgs) -> Result<()> {
    let seed = args.seed.unwrap_or_else(entropy_seed);
    if args.seed.is_none() {
        eprintln!("seed = {seed}");
    }

    if let Some(source) = &args.random_baseline_of {
        let (words, clustering) = read_clustering_file(source)?;
        let baseline = random_clustering(words.len(), &clustering.size_profile(), seed)?;
        let mut out = BufWriter::new(fs::File::create(&args.out)?);
        baseline.write_csv(&words, &mut out)?;
        out.flush()?;
        return Ok(());
    }

    let input = args
        .input
        .expect("clap requires --in when --random-baseline-of is absent");
    let file = BufReader::new(fs::File::open(&input)?);
    let (words, matrix) = EmbeddingMatrix::read_text(file, Method::Word2Vec)?;
    let outcome = kmeans_cosine(&matrix, &words, args.k, args.max_iters, seed, args.threads)?;
    eprintln!(
        "k-means: {} iterations, converged = {}, objective = {:.3}",
        outcome.objective_per_iter.len(),
        outcome.converged,
        outcome.objective_per_iter.last().unwrap_or(&0.0)
    );
    let mut out = BufWriter::new(fs::File::create(&args.out)?);
    outcome.clustering.write_csv(&words, &mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let (words, clustering) = read_clustering_file(&args.clusters)?;
    let lexicon = match &args.ipa_lexicon {
        Some(path) => Some(load_ipa_lexicon(path)?),
        None => None,
    };
    let metric = match &lexicon {
        Some(lex) => RsMetric::Ipa {
            lexicon: lex,
            fallback: !args.strict_ipa,
        },
        None => RsMetric::Basic,
    };
    let summary = score_clustering(&clustering, &words, &metric)?;
    eprintln!(
        "corpus mean RS = {:.2}% over {} clusters ({} excluded)",
        summary.corpus_mean * 100.0,
        summary.included_clusters,
        summary.excluded_clusters
    );
    let mut out = BufWriter::new(fs::File::create(&args.out)?);
    write_scores_csv(&summary, &mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let mut runs = Vec::new();
    let mut echo = vec![("corpus".to_string(), args.corpus.clone())];
    for spec in &args.scores {
        let (method, path) = spec.split_once('=').ok_or_else(|| {
            Error::Config(format!("--scores expects method=path, got {spec:?}"))
        })?;
        let file = BufReader::new(fs::File::open(path)?);
        let summary = read_scores_csv(file)?;
        echo.push((format!("scores.{method}"), path.to_string()));
        runs.push(EvaluatedRun {
            corpus: args.corpus.clone(),
            method: method.to_string(),
            summary,
        });
    }
    let report = build_report(&runs, echo)?;
    fs::create_dir_all(&args.out_dir)?;
    write_report_files(&report, &args.out_dir)?;
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let overrides = ConfigOverrides {
        corpora: args.corpora,
        methods: args.methods.map(|m| m.0),
        dim: args.dim,
        window: args.window,
        min_count: args.min_count,
        mode: args.mode,
        negative: args.negative,
        epochs: args.epochs,
        alpha: args.alpha,
        min_alpha: args.min_alpha,
        subsample: args.subsample,
        x_max: args.x_max,
        glove_alpha: args.glove_alpha,
        glove_iters: args.glove_iters,
        glove_eta: args.glove_eta,
        k: args.k,
        max_iters: args.max_iters,
        sentence_breaks: args.sentence_breaks,
        threads: args.threads,
        seed_embedding: args.seed_embedding,
        seed_clustering: args.seed_clustering,
        seed_baseline: args.seed_baseline,
        ipa_lexicon: args.ipa_lexicon,
        out_dir: args.out_dir,
    };
    let cfg = PipelineConfig::resolve(args.config.as_deref(), &overrides)?;
    let report = run_pipeline(&cfg)?;

    let mut stdout = std::io::stdout().lock();
    report.write_summary_csv(&mut stdout)?;
    writeln!(stdout)?;
    writeln!(stdout, "artifacts written to {}", cfg.out_dir.display())?;
    Ok(())
}

fn cmd_gen_corpus(args: GenCorpusArgs) -> Result<()> {
    let text = generate_poetry_corpus(&CorpusSpec {
        tokens: args.tokens,
        seed: args.seed,
    });
    fs::write(&args.out, text)?;
    Ok(())
}
