//! Corpus ingestion: tokenization, vocabulary construction, and the summary
//! statistics reported for each input text.
//!
//! Tokens are maximal runs of Unicode letters and combining marks, lowercased;
//! digits and punctuation act as separators. This treats Latin-script and
//! Arabic-script text uniformly. Input files are NFC-normalized on read so
//! that later character-level comparisons are stable.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Tokenization options.
#[derive(Clone, Debug, Default)]
pub struct TokenizerConfig {
    /// When set, record sentence boundaries at '.', '!', '?' and newlines so
    /// that context windows do not cross them. Off by default: the reference
    /// embedding tools scan flat text.
    pub sentence_breaks: bool,
}

/// Tokenizer output: surface tokens in document order, plus the positions
/// where a new sentence starts (empty unless sentence breaks were requested).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tokenized {
    pub tokens: Vec<String>,
    /// Sorted indices `b` (0 < b < tokens.len()) meaning `tokens[b]` starts a
    /// new sentence.
    pub sentence_breaks: Vec<usize>,
}

fn is_token_char(c: char) -> bool {
    c.is_alphabetic() || is_combining_mark(c)
}

fn is_break_char(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '\n')
}

/// Splits text into lowercase word tokens.
pub fn tokenize(text: &str, rules: &TokenizerConfig) -> Tokenized {
    let mut tokens: Vec<String> = Vec::new();
    let mut breaks: Vec<usize> = Vec::new();
    let mut current = String::new();

    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        if !current.is_empty() {
            tokens.push(std::mem::take(current));
        }
    };

    for c in text.chars() {
        if is_token_char(c) {
            current.extend(c.to_lowercase());
        } else {
            flush(&mut current, &mut tokens);
            if rules.sentence_breaks && is_break_char(c) {
                let pos = tokens.len();
                if pos > 0 && breaks.last() != Some(&pos) {
                    breaks.push(pos);
                }
            }
        }
    }
    flush(&mut current, &mut tokens);

    // A boundary after the final token separates nothing.
    if breaks.last() == Some(&tokens.len()) {
        breaks.pop();
    }

    Tokenized {
        tokens,
        sentence_breaks: breaks,
    }
}

/// Reads a UTF-8 text file, pointing at the offending byte offset when the
/// encoding is invalid, and applies NFC normalization.
pub fn read_corpus_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::InvalidEncoding {
        path: path.display().to_string(),
        offset: e.utf8_error().valid_up_to(),
    })?;
    Ok(text.nfc().collect())
}

/// Word inventory: a dense bijection between surface forms and ids, with
/// occurrence counts. Iteration order is the insertion order of first
/// occurrence, which keeps downstream runs deterministic.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    words: Vec<String>,
    ids: HashMap<String, u32>,
    counts: Vec<u64>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.ids.get(word).copied()
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Builds the vocabulary of tokens occurring at least `min_count` times.
/// Ids are dense from 0 in order of first occurrence.
pub fn build_vocabulary<S: AsRef<str>>(tokens: &[S], min_count: u64) -> Vocabulary {
    assert!(min_count >= 1, "min_count must be at least 1");

    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_ref()).or_insert(0) += 1;
    }

    let mut vocab = Vocabulary::default();
    for t in tokens {
        let t = t.as_ref();
        let count = counts[t];
        if count >= min_count && !vocab.ids.contains_key(t) {
            vocab.ids.insert(t.to_string(), vocab.words.len() as u32);
            vocab.words.push(t.to_string());
            vocab.counts.push(count);
        }
    }
    vocab
}

/// The corpus as vocabulary ids in document order. Tokens dropped by
/// `min_count` are skipped and sentence boundaries are remapped accordingly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenCorpus {
    pub tokens: Vec<u32>,
    pub sentence_breaks: Vec<usize>,
}

impl TokenCorpus {
    pub fn encode(tokenized: &Tokenized, vocab: &Vocabulary) -> TokenCorpus {
        let mut tokens = Vec::with_capacity(tokenized.tokens.len());
        let mut breaks = Vec::with_capacity(tokenized.sentence_breaks.len());
        let mut next_break = tokenized.sentence_breaks.iter().peekable();

        for (pos, t) in tokenized.tokens.iter().enumerate() {
            while next_break.peek() == Some(&&pos) {
                next_break.next();
                if !tokens.is_empty() && breaks.last() != Some(&tokens.len()) {
                    breaks.push(tokens.len());
                }
            }
            if let Some(id) = vocab.id(t) {
                tokens.push(id);
            }
        }
        if breaks.last() == Some(&tokens.len()) {
            breaks.pop();
        }

        TokenCorpus {
            tokens,
            sentence_breaks: breaks,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Expands ids back to surface forms.
    pub fn decode<'a>(&self, vocab: &'a Vocabulary) -> Vec<&'a str> {
        self.tokens.iter().map(|&id| vocab.word(id)).collect()
    }

    /// Sentence ranges `[start, end)` implied by the recorded boundaries.
    pub fn sentences(&self) -> Vec<(usize, usize)> {
        let mut ranges = Vec::with_capacity(self.sentence_breaks.len() + 1);
        let mut start = 0;
        for &b in &self.sentence_breaks {
            ranges.push((start, b));
            start = b;
        }
        ranges.push((start, self.tokens.len()));
        ranges
    }
}

/// Per-corpus summary statistics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorpusStats {
    pub total_tokens: u64,
    pub unique_words: u64,
    /// Mean number of Unicode scalar values per unique word.
    pub avg_word_length: f64,
}

pub fn corpus_stats(corpus: &TokenCorpus, vocab: &Vocabulary) -> CorpusStats {
    let total_len: u64 = vocab
        .words()
        .iter()
        .map(|w| w.chars().count() as u64)
        .sum();
    let avg = if vocab.is_empty() {
        0.0
    } else {
        total_len as f64 / vocab.len() as f64
    };
    CorpusStats {
        total_tokens: corpus.len() as u64,
        unique_words: vocab.len() as u64,
        avg_word_length: avg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(text: &str) -> Vec<String> {
        tokenize(text, &TokenizerConfig::default()).tokens
    }

    #[test]
    fn punctuation_is_a_separator() {
        assert_eq!(toks("Doom, and gloom!"), vec!["doom", "and", "gloom"]);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert_eq!(toks(""), Vec::<String>::new());
    }

    #[test]
    fn clean_text_passes_through() {
        assert_eq!(toks("cheese peas cheese"), vec!["cheese", "peas", "cheese"]);
    }

    #[test]
    fn digits_split_tokens() {
        assert_eq!(toks("abc123def"), vec!["abc", "def"]);
    }

    #[test]
    fn tokenization_is_idempotent_on_its_own_output() {
        let first = toks("Wild-eyed; the rain... came down 42 times (again)!");
        let rejoined = first.join(" ");
        assert_eq!(toks(&rejoined), first);
    }

    #[test]
    fn sentence_breaks_are_recorded() {
        let t = tokenize(
            "one two. three!\nfour",
            &TokenizerConfig {
                sentence_breaks: true,
            },
        );
        assert_eq!(t.tokens, vec!["one", "two", "three", "four"]);
        assert_eq!(t.sentence_breaks, vec![2, 3]);
    }

    #[test]
    fn trailing_and_duplicate_breaks_collapse() {
        let t = tokenize(
            "one!! two...",
            &TokenizerConfig {
                sentence_breaks: true,
            },
        );
        assert_eq!(t.tokens, vec!["one", "two"]);
        assert_eq!(t.sentence_breaks, vec![1]);
    }

    #[test]
    fn vocabulary_counts_and_ids() {
        let tokens = ["a", "b", "a"];
        let v = build_vocabulary(&tokens, 1);
        assert_eq!(v.len(), 2);
        assert_eq!(v.id("a"), Some(0));
        assert_eq!(v.id("b"), Some(1));
        assert_eq!(v.count(0), 2);
        assert_eq!(v.count(1), 1);
    }

    #[test]
    fn min_count_threshold_drops_rare_words() {
        let tokens = ["a", "b", "a"];
        let v = build_vocabulary(&tokens, 2);
        assert_eq!(v.len(), 1);
        assert_eq!(v.id("a"), Some(0));
        assert_eq!(v.id("b"), None);
        assert_eq!(v.count(0), 2);
    }

    #[test]
    fn empty_tokens_empty_vocabulary() {
        let v = build_vocabulary::<&str>(&[], 1);
        assert!(v.is_empty());
    }

    #[test]
    fn encode_then_decode_round_trips() {
        let tokenized = tokenize("the cat saw the dog", &TokenizerConfig::default());
        let vocab = build_vocabulary(&tokenized.tokens, 1);
        let corpus = TokenCorpus::encode(&tokenized, &vocab);
        assert_eq!(corpus.decode(&vocab), tokenized.tokens);
    }

    #[test]
    fn encode_remaps_breaks_when_tokens_drop() {
        let tokenized = Tokenized {
            tokens: ["x", "rare", "y", "z"].iter().map(|s| s.to_string()).collect(),
            sentence_breaks: vec![2],
        };
        let mut all = tokenized.tokens.clone();
        all.extend(["x", "y", "z"].iter().map(|s| s.to_string()));
        let vocab = build_vocabulary(&all, 2); // "rare" occurs once overall
        let corpus = TokenCorpus::encode(&tokenized, &vocab);
        assert_eq!(corpus.tokens.len(), 3);
        assert_eq!(corpus.sentence_breaks, vec![1]);
    }

    #[test]
    fn stats_hand_example() {
        let tokenized = tokenize("the cat the", &TokenizerConfig::default());
        let vocab = build_vocabulary(&tokenized.tokens, 1);
        let corpus = TokenCorpus::encode(&tokenized, &vocab);
        let s = corpus_stats(&corpus, &vocab);
        assert_eq!(s.total_tokens, 3);
        assert_eq!(s.unique_words, 2);
        assert!((s.avg_word_length - 3.0).abs() < 1e-12);
    }

    #[test]
    fn stats_single_token() {
        let tokenized = tokenize("a", &TokenizerConfig::default());
        let vocab = build_vocabulary(&tokenized.tokens, 1);
        let corpus = TokenCorpus::encode(&tokenized, &vocab);
        let s = corpus_stats(&corpus, &vocab);
        assert_eq!(s.total_tokens, 1);
        assert_eq!(s.unique_words, 1);
        assert!((s.avg_word_length - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stats_empty_corpus() {
        let vocab = build_vocabulary::<&str>(&[], 1);
        let corpus = TokenCorpus::default();
        let s = corpus_stats(&corpus, &vocab);
        assert_eq!(s.total_tokens, 0);
        assert_eq!(s.unique_words, 0);
        assert_eq!(s.avg_word_length, 0.0);
    }

    #[test]
    fn counts_are_order_invariant() {
        let a = ["c", "a", "b", "a"];
        let b = ["a", "b", "a", "c"];
        let va = build_vocabulary(&a, 1);
        let vb = build_vocabulary(&b, 1);
        for w in ["a", "b", "c"] {
            assert_eq!(va.count(va.id(w).unwrap()), vb.count(vb.id(w).unwrap()));
        }
    }

    #[test]
    fn combining_marks_stay_inside_tokens() {
        // "se\u{0301}" is 'e' + combining acute.
        let t = toks("se\u{0301}pia tone");
        assert_eq!(t, vec!["se\u{0301}pia", "tone"]);
    }
}
