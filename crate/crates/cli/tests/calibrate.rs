//! One-off calibration probe for the fixture generator (run with
//! `cargo test -p rhymevec-cli --test calibrate -- --ignored --nocapture`).

use rhymevec::clustering::random_clustering;
use rhymevec::corpus::{build_vocabulary, corpus_stats, tokenize, TokenCorpus, TokenizerConfig};
use rhymevec::rhythm::{rs_basic, score_clustering, RsMetric};
use rhymevec::rng::Rng;
use rhymevec_cli::fixture::{generate_poetry_corpus, CorpusSpec};

#[test]
#[ignore]
fn probe_fixture_statistics() {
    let text = generate_poetry_corpus(&CorpusSpec {
        tokens: 150_000,
        seed: 1,
    });
    let t = tokenize(&text, &TokenizerConfig::default());
    let vocab = build_vocabulary(&t.tokens, 1);
    let corpus = TokenCorpus::encode(&t, &vocab);
    let stats = corpus_stats(&corpus, &vocab);
    println!(
        "tokens = {}, unique = {}, avg_len = {:.2}",
        stats.total_tokens, stats.unique_words, stats.avg_word_length
    );

    // Monte-Carlo estimate of the mean RS over random vocabulary pairs.
    let mut rng = Rng::seed_from(7);
    let n = vocab.len() as u64;
    let mut sum = 0.0;
    let pairs = 200_000;
    for _ in 0..pairs {
        let a = vocab.word(rng.below(n) as u32);
        let b = vocab.word(rng.below(n) as u32);
        sum += rs_basic(a, b).unwrap().value();
    }
    println!("mean random-pair RS = {:.3}%", sum / pairs as f64 * 100.0);

    // Actual random clustering at k = 1000 with near-uniform sizes.
    let k = 1000;
    let base = vocab.len() / k;
    let extra = vocab.len() % k;
    let profile: Vec<usize> = (0..k).map(|i| base + usize::from(i < extra)).collect();
    for seed in [1u64, 2, 3] {
        let clustering = random_clustering(vocab.len(), &profile, seed).unwrap();
        let summary = score_clustering(&clustering, vocab.words(), &RsMetric::Basic).unwrap();
        println!(
            "random clustering seed {seed}: corpus mean RS = {:.3}%",
            summary.corpus_mean * 100.0
        );
    }
}
