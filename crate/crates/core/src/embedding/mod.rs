//! Word-embedding training: a native Word2Vec (CBOW / skip-gram with
//! negative sampling) and a GloVe-style weighted least-squares factorization
//! of the co-occurrence table, both configured to the reference tools'
//! defaults.

mod cooccur;
mod glove;
mod word2vec;

pub use cooccur::{build_cooccurrence, CoocEntry, CooccurrenceTable};
pub use glove::{train_glove, GloveStats};
pub use word2vec::train_word2vec;

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Which trainer produced a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Word2Vec,
    Glove,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Word2Vec => "word2vec",
            Method::Glove => "glove",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "word2vec" => Ok(Method::Word2Vec),
            "glove" => Ok(Method::Glove),
            other => Err(Error::Config(format!(
                "unknown method {other:?} (expected word2vec or glove)"
            ))),
        }
    }
}

/// Word2Vec training mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Word2VecMode {
    Cbow,
    SkipGram,
}

impl Word2VecMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Word2VecMode::Cbow => "cbow",
            Word2VecMode::SkipGram => "skipgram",
        }
    }
}

impl std::str::FromStr for Word2VecMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word2VecMode> {
        match s {
            "cbow" => Ok(Word2VecMode::Cbow),
            "skipgram" => Ok(Word2VecMode::SkipGram),
            other => Err(Error::Config(format!(
                "unknown word2vec mode {other:?} (expected cbow or skipgram)"
            ))),
        }
    }
}

/// Hyperparameters for both trainers. Defaults reproduce the experimental
/// configuration: vectors of size 100, window 15, min_count 1, with the
/// remaining knobs at the reference implementations' defaults.
#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub dim: usize,
    pub window: usize,
    pub min_count: u64,
    /// Worker threads. 1 selects the fully deterministic path; more workers
    /// train hogwild-style with unsynchronized updates.
    pub threads: usize,

    // Word2Vec
    pub mode: Word2VecMode,
    pub epochs: usize,
    pub initial_alpha: f64,
    pub min_alpha: f64,
    pub negative: usize,
    pub subsample: f64,

    // GloVe
    pub glove_iters: usize,
    pub glove_eta: f64,
    pub glove_x_max: f64,
    pub glove_alpha: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 100,
            window: 15,
            min_count: 1,
            threads: 1,
            mode: Word2VecMode::Cbow,
            epochs: 5,
            initial_alpha: 0.025,
            min_alpha: 1e-4,
            negative: 5,
            subsample: 1e-3,
            glove_iters: 15,
            glove_eta: 0.05,
            glove_x_max: 10.0,
            glove_alpha: 0.75,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::Config("dim must be at least 1".into()));
        }
        if self.window < 1 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        if self.min_count < 1 {
            return Err(Error::Config("min_count must be at least 1".into()));
        }
        if self.threads < 1 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.initial_alpha <= 0.0 || self.min_alpha <= 0.0 || self.glove_eta <= 0.0 {
            return Err(Error::Config("learning rates must be positive".into()));
        }
        if self.epochs < 1 || self.glove_iters < 1 {
            return Err(Error::Config("iteration counts must be at least 1".into()));
        }
        if self.glove_x_max <= 0.0 || self.glove_alpha <= 0.0 {
            return Err(Error::Config("glove weighting parameters must be positive".into()));
        }
        if self.subsample < 0.0 {
            return Err(Error::Config("subsample threshold must be non-negative".into()));
        }
        Ok(())
    }
}

/// One vector of fixed dimension per vocabulary id, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMatrix {
    dim: usize,
    data: Vec<f32>,
    method: Method,
}

impl EmbeddingMatrix {
    pub fn from_flat(dim: usize, data: Vec<f32>, method: Method) -> Result<EmbeddingMatrix> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(Error::Internal(format!(
                "embedding data of length {} is not a multiple of dim {}",
                data.len(),
                dim
            )));
        }
        Ok(EmbeddingMatrix { dim, data, method })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors (vocabulary size).
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn vector(&self, id: u32) -> &[f32] {
        let start = id as usize * self.dim;
        &self.data[start..start + self.dim]
    }

    /// Fails if any trained component is NaN or infinite.
    pub fn validate_finite(&self) -> Result<()> {
        for (i, v) in self.data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Internal(format!(
                    "non-finite component {} in vector {}",
                    v,
                    i / self.dim
                )));
            }
        }
        Ok(())
    }

    /// Writes the common word-vector text format: one line per word,
    /// `word v1 v2 ... vdim`, floats printed with full round-trip precision.
    pub fn write_text<W: Write>(&self, words: &[String], out: &mut W) -> Result<()> {
        if words.len() != self.len() {
            return Err(Error::Internal(format!(
                "{} words for {} vectors",
                words.len(),
                self.len()
            )));
        }
        for (id, word) in words.iter().enumerate() {
            out.write_all(word.as_bytes())?;
            for v in self.vector(id as u32) {
                write!(out, " {v}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads the text format back; the method tag is taken from the caller
    /// since the format does not carry it.
    pub fn read_text<R: BufRead>(reader: R, method: Method) -> Result<(Vec<String>, EmbeddingMatrix)> {
        let mut words = Vec::new();
        let mut data: Vec<f32> = Vec::new();
        let mut dim: Option<usize> = None;

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(' ');
            let word = parts
                .next()
                .ok_or_else(|| Error::Data(format!("empty line {} in embedding file", lineno + 1)))?;
            let start = data.len();
            for p in parts {
                let v: f32 = p.parse().map_err(|_| {
                    Error::Data(format!(
                        "bad float {:?} on line {} of embedding file",
                        p,
                        lineno + 1
                    ))
                })?;
                data.push(v);
            }
            let row_len = data.len() - start;
            match dim {
                None => dim = Some(row_len),
                Some(d) if d != row_len => {
                    return Err(Error::Data(format!(
                        "inconsistent vector length on line {}: {} vs {}",
                        lineno + 1,
                        row_len,
                        d
                    )))
                }
                _ => {}
            }
            words.push(word.to_string());
        }

        let dim = dim.ok_or_else(|| Error::Data("empty embedding file".into()))?;
        Ok((words, EmbeddingMatrix { dim, data, method }))
    }
}

/// Cosine similarity of two equal-length vectors, in [-1, 1].
pub fn cosine(u: &[f32], v: &[f32]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Internal(format!(
            "cosine of vectors with different lengths {} and {}",
            u.len(),
            v.len()
        )));
    }
    let mut dot = 0.0f64;
    let mut nu = 0.0f64;
    let mut nv = 0.0f64;
    for (&a, &b) in u.iter().zip(v) {
        let (a, b) = (a as f64, b as f64);
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::UndefinedSimilarity);
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

/// Uniform initialization in [-0.5/dim, 0.5/dim), the convention shared by
/// both reference trainers.
pub(crate) fn init_vector(rng: &mut crate::rng::Rng, dim: usize, len: usize) -> Vec<f64> {
    let half = 0.5 / dim as f64;
    (0..len).map(|_| rng.range_f64(-half, half)).collect()
}
