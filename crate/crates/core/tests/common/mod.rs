#![allow(dead_code)]

//! Shared helpers for integration tests: independently coded oracles and
//! seeded random-input generators.

use rhymevec::rng::Rng;

/// Reference pair score, written index-from-the-end rather than with reversed
/// iterators so it does not share the implementation's code path.
pub fn oracle_rs(a: &str, b: &str) -> f64 {
    let ca: Vec<char> = a.chars().collect();
    let cb: Vec<char> = b.chars().collect();
    let common = ca.len().min(cb.len());
    let mut matches = 0usize;
    for i in 1..=common {
        if ca[ca.len() - i] == cb[cb.len() - i] {
            matches += 1;
        }
    }
    matches as f64 / ca.len().max(cb.len()) as f64
}

/// Brute-force cluster mean: materialize every unordered pair, then average.
pub fn oracle_cluster_mean(words: &[String]) -> Option<f64> {
    let n = words.len();
    if n < 2 {
        return None;
    }
    let mut vals = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            vals.push(oracle_rs(&words[x], &words[y]));
        }
    }
    Some(vals.iter().sum::<f64>() / vals.len() as f64)
}

/// Compensated (Kahan) mean for checking plain summation.
pub fn kahan_mean(vals: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for &v in vals {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum / vals.len() as f64
}

const WORD_CHARS: &[char] = &[
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r',
    's', 't', 'u', 'v', 'w', 'x', 'y', 'z', 'é', 'ß', 'ж', 'م',
];

/// A random non-empty word of 1..=12 characters, mixing in some multi-byte
/// scalars so character and byte positions differ.
pub fn random_word(rng: &mut Rng) -> String {
    let len = 1 + rng.below(12) as usize;
    (0..len)
        .map(|_| WORD_CHARS[rng.below(WORD_CHARS.len() as u64) as usize])
        .collect()
}

pub fn char_count(s: &str) -> usize {
    s.chars().count()
}
