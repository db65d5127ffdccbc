//! Native Word2Vec with negative sampling, mirroring the Gensim 4.1.2
//! defaults: CBOW with context averaging (skip-gram selectable), 5 negative
//! samples from a count^0.75 noise distribution, frequency subsampling,
//! dynamic window shrinking, and a linearly decaying learning rate.

use std::sync::atomic::{AtomicU64, Ordering};

use super::{EmbeddingMatrix, Method, TrainConfig, Word2VecMode};
use crate::corpus::{TokenCorpus, Vocabulary};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::sync::AtomicF32Slice;

const MAX_EXP: f32 = 6.0;
const MAX_SENTENCE: usize = 10_000;

pub fn train_word2vec(
    corpus: &TokenCorpus,
    vocab: &Vocabulary,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<EmbeddingMatrix> {
    cfg.validate()?;
    if corpus.is_empty() || vocab.is_empty() {
        return Err(Error::Config("cannot train word2vec on an empty corpus".into()));
    }

    let n = vocab.len();
    let dim = cfg.dim;
    let total_words = corpus.len() as u64;

    // Input vectors start uniform in [-0.5/dim, 0.5/dim); output weights at 0.
    let mut init_rng = Rng::seed_from(seed);
    let half = 0.5 / dim as f32;
    let syn0_init: Vec<f32> = (0..n * dim)
        .map(|_| init_rng.range_f64(-half as f64, half as f64) as f32)
        .collect();
    let syn0 = AtomicF32Slice::from_vec(syn0_init);
    let syn1neg = AtomicF32Slice::from_vec(vec![0.0; n * dim]);

    // Noise distribution proportional to count^0.75, as a cumulative table.
    let mut noise_cum = Vec::with_capacity(n);
    let mut acc = 0.0f64;
    for id in 0..n {
        acc += (vocab.count(id as u32) as f64).powf(0.75);
        noise_cum.push(acc);
    }

    // Keep probability per word for frequency subsampling (word2vec formula).
    let keep_prob: Vec<f64> = (0..n)
        .map(|id| {
            if cfg.subsample == 0.0 {
                return 1.0;
            }
            let cn = vocab.count(id as u32) as f64;
            let threshold = cfg.subsample * total_words as f64;
            ((threshold / cn).sqrt() + threshold / cn).min(1.0)
        })
        .collect();

    let sentences: Vec<&[u32]> = corpus
        .sentences()
        .into_iter()
        .flat_map(|(start, end)| corpus.tokens[start..end].chunks(MAX_SENTENCE))
        .filter(|s| !s.is_empty())
        .collect();

    let processed = AtomicU64::new(0);
    let threads = cfg.threads.min(sentences.len().max(1));

    let run_worker = |worker: usize| {
        let mut rng = Rng::fork(seed, worker as u64 + 1);
        let mut ctx = TrainContext {
            syn0: &syn0,
            syn1neg: &syn1neg,
            noise_cum: &noise_cum,
            keep_prob: &keep_prob,
            cfg,
            dim,
            alpha: cfg.initial_alpha as f32,
        };
        let budget = (cfg.epochs as u64) * total_words + 1;
        for _ in 0..cfg.epochs {
            for (si, sentence) in sentences.iter().enumerate() {
                if si % threads != worker {
                    continue;
                }
                let done = processed.fetch_add(sentence.len() as u64, Ordering::Relaxed);
                let progress = done as f64 / budget as f64;
                ctx.alpha = (cfg.initial_alpha
                    - (cfg.initial_alpha - cfg.min_alpha) * progress)
                    .max(cfg.min_alpha) as f32;
                ctx.train_sentence(sentence, &mut rng);
            }
        }
    };

    if threads <= 1 {
        run_worker(0);
    } else {
        std::thread::scope(|scope| {
            for worker in 0..threads {
                let run_worker = &run_worker;
                scope.spawn(move || run_worker(worker));
            }
        });
    }

    let matrix = EmbeddingMatrix::from_flat(dim, syn0.to_vec(), Method::Word2Vec)?;
    matrix.validate_finite()?;
    Ok(matrix)
}

struct TrainContext<'a> {
    syn0: &'a AtomicF32Slice,
    syn1neg: &'a AtomicF32Slice,
    noise_cum: &'a [f64],
    keep_prob: &'a [f64],
    cfg: &'a TrainConfig,
    dim: usize,
    alpha: f32,
}

impl TrainContext<'_> {
    fn sample_noise(&self, rng: &mut Rng) -> u32 {
        let total = *self.noise_cum.last().unwrap();
        let r = rng.next_f64() * total;
        // r can round up to exactly `total`; clamp to the last id.
        self.noise_cum
            .partition_point(|&c| c <= r)
            .min(self.noise_cum.len() - 1) as u32
    }

    fn train_sentence(&mut self, sentence: &[u32], rng: &mut Rng) {
        let window = self.cfg.window;

        let mut sen: Vec<u32> = Vec::with_capacity(sentence.len());
        for &id in sentence {
            let p = self.keep_prob[id as usize];
            if p >= 1.0 || rng.next_f64() < p {
                sen.push(id);
            }
        }

        for center in 0..sen.len() {
            let shrink = rng.below(window as u64) as usize;
            let reach = window - shrink;
            let lo = center.saturating_sub(reach);
            let hi = (center + reach).min(sen.len().saturating_sub(1));

            match self.cfg.mode {
                Word2VecMode::Cbow => self.cbow_step(&sen, center, lo, hi, rng),
                Word2VecMode::SkipGram => self.skipgram_step(&sen, center, lo, hi, rng),
            }
        }
    }

    fn negative_pass(
        &self,
        input: &[f32],
        positive: u32,
        work: &mut [f32],
        rng: &mut Rng,
    ) {
        let dim = self.dim;
        for d in 0..=self.cfg.negative {
            let (target, label) = if d == 0 {
                (positive, 1.0f32)
            } else {
                let t = self.sample_noise(rng);
                if t == positive {
                    continue;
                }
                (t, 0.0f32)
            };
            let row = target as usize * dim;

            let mut f = 0.0f32;
            for k in 0..dim {
                f += input[k] * self.syn1neg.get(row + k);
            }
            let g = if f > MAX_EXP {
                (label - 1.0) * self.alpha
            } else if f < -MAX_EXP {
                label * self.alpha
            } else {
                (label - 1.0 / (1.0 + (-f).exp())) * self.alpha
            };
            for k in 0..dim {
                work[k] += g * self.syn1neg.get(row + k);
            }
            for k in 0..dim {
                self.syn1neg.add(row + k, g * input[k]);
            }
        }
    }

    fn cbow_step(&self, sen: &[u32], center: usize, lo: usize, hi: usize, rng: &mut Rng) {
        let dim = self.dim;
        let mut neu1 = vec![0.0f32; dim];
        let mut count = 0usize;
        for j in lo..=hi {
            if j == center {
                continue;
            }
            let row = sen[j] as usize * dim;
            for k in 0..dim {
                neu1[k] += self.syn0.get(row + k);
            }
            count += 1;
        }
        if count == 0 {
            return;
        }
        let inv = 1.0 / count as f32;
        for v in neu1.iter_mut() {
            *v *= inv;
        }

        let mut work = vec![0.0f32; dim];
        self.negative_pass(&neu1, sen[center], &mut work, rng);

        // Gensim's cbow_mean update: the full error vector goes to every
        // context word (the averaging already happened on the forward pass).
        for j in lo..=hi {
            if j == center {
                continue;
            }
            let row = sen[j] as usize * dim;
            for k in 0..dim {
                self.syn0.add(row + k, work[k]);
            }
        }
    }

    fn skipgram_step(&self, sen: &[u32], center: usize, lo: usize, hi: usize, rng: &mut Rng) {
        let dim = self.dim;
        for j in lo..=hi {
            if j == center {
                continue;
            }
            let row = sen[j] as usize * dim;
            let input: Vec<f32> = (0..dim).map(|k| self.syn0.get(row + k)).collect();
            let mut work = vec![0.0f32; dim];
            self.negative_pass(&input, sen[center], &mut work, rng);
            for k in 0..dim {
                self.syn0.add(row + k, work[k]);
            }
        }
    }
}
