//! Sparse co-occurrence counts, built the way the reference GloVe pipeline
//! does: every pair of tokens within the window contributes 1/d to both
//! directions, where d is the positional distance.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::corpus::{TokenCorpus, Vocabulary};
use crate::error::{Error, Result};

/// One weighted count: X[word][context] = weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoocEntry {
    pub word: u32,
    pub context: u32,
    pub weight: f64,
}

/// Sparse `X_ij`, stored as entries sorted by `(word, context)` so that
/// iteration order, and therefore training, is deterministic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CooccurrenceTable {
    entries: Vec<CoocEntry>,
    vocab_size: usize,
}

pub fn build_cooccurrence(
    corpus: &TokenCorpus,
    vocab: &Vocabulary,
    window: usize,
) -> CooccurrenceTable {
    assert!(window >= 1, "window must be at least 1");

    let mut acc: HashMap<(u32, u32), f64> = HashMap::new();
    for (start, end) in corpus.sentences() {
        let sentence = &corpus.tokens[start..end];
        for (pos, &center) in sentence.iter().enumerate() {
            let reach = pos.min(window);
            for d in 1..=reach {
                let left = sentence[pos - d];
                let w = 1.0 / d as f64;
                *acc.entry((center, left)).or_insert(0.0) += w;
                *acc.entry((left, center)).or_insert(0.0) += w;
            }
        }
    }

    let mut entries: Vec<CoocEntry> = acc
        .into_iter()
        .map(|((word, context), weight)| CoocEntry {
            word,
            context,
            weight,
        })
        .collect();
    entries.sort_unstable_by_key(|e| (e.word, e.context));

    CooccurrenceTable {
        entries,
        vocab_size: vocab.len(),
    }
}

impl CooccurrenceTable {
    pub fn entries(&self) -> &[CoocEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Looks up X_ij, returning 0 for absent pairs.
    pub fn weight(&self, word: u32, context: u32) -> f64 {
        match self
            .entries
            .binary_search_by_key(&(word, context), |e| (e.word, e.context))
        {
            Ok(idx) => self.entries[idx].weight,
            Err(_) => 0.0,
        }
    }

    /// Persists as raw binary triples (u32 id, u32 id, f64 weight), little endian.
    pub fn write_binary<W: Write>(&self, out: &mut W) -> Result<()> {
        for e in &self.entries {
            out.write_all(&e.word.to_le_bytes())?;
            out.write_all(&e.context.to_le_bytes())?;
            out.write_all(&e.weight.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(reader: &mut R) -> Result<CooccurrenceTable> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        if bytes.len() % 16 != 0 {
            return Err(Error::Data(format!(
                "co-occurrence file length {} is not a multiple of the 16-byte record size",
                bytes.len()
            )));
        }
        let mut entries = Vec::with_capacity(bytes.len() / 16);
        let mut max_id = 0u32;
        for rec in bytes.chunks_exact(16) {
            let word = u32::from_le_bytes(rec[0..4].try_into().unwrap());
            let context = u32::from_le_bytes(rec[4..8].try_into().unwrap());
            let weight = f64::from_le_bytes(rec[8..16].try_into().unwrap());
            if weight <= 0.0 || !weight.is_finite() {
                return Err(Error::Data(format!(
                    "non-positive co-occurrence weight {weight} for pair ({word}, {context})"
                )));
            }
            max_id = max_id.max(word).max(context);
            entries.push(CoocEntry {
                word,
                context,
                weight,
            });
        }
        entries.sort_unstable_by_key(|e| (e.word, e.context));
        let vocab_size = if entries.is_empty() { 0 } else { max_id as usize + 1 };
        Ok(CooccurrenceTable {
            entries,
            vocab_size,
        })
    }
}
