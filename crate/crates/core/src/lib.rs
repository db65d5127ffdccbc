//! Does word-embedding geometry capture how words *sound*? This crate
//! implements the machinery to test that: it trains Word2Vec-style and
//! GloVe-style embeddings over a plain-text corpus, clusters the vectors by
//! cosine similarity, scores every cluster with an ending-aligned
//! rhythmic-similarity metric, and compares the result against size-matched
//! random clusterings.
//!
//! The pieces compose as a pipeline (see the `rhymevec` CLI) but each stage
//! is an ordinary function over plain data and can be used on its own:
//!
//! - [`corpus`]: tokenization, vocabulary, corpus statistics
//! - [`embedding`]: co-occurrence counting, GloVe and Word2Vec trainers
//! - [`clustering`]: spherical k-means and the random baseline
//! - [`rhythm`]: the pair metric, its IPA variant, cluster scoring
//! - [`report`]: summary rows, 100-bin histograms, configuration echo

pub mod clustering;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod report;
pub mod rhythm;
pub mod rng;

mod sync;

pub use clustering::{kmeans_cosine, random_clustering, Clustering, KmeansOutcome, Provenance};
pub use corpus::{
    build_vocabulary, corpus_stats, read_corpus_text, tokenize, CorpusStats, TokenCorpus,
    Tokenized, TokenizerConfig, Vocabulary,
};
pub use embedding::{
    build_cooccurrence, cosine, train_glove, train_word2vec, CoocEntry, CooccurrenceTable,
    EmbeddingMatrix, GloveStats, Method, TrainConfig, Word2VecMode,
};
pub use error::{Error, Result};
pub use report::{build_histogram, build_report, ComparisonReport, EvaluatedRun, RsHistogram};
pub use rhythm::{
    cluster_mean_rs, corpus_mean_rs, rs_basic, rs_ipa, score_clustering, ClusterRsSummary,
    ClusterScore, IpaLexicon, RsMetric, RsScore,
};
