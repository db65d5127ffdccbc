//! Deterministic synthetic poetry generator. Produces an English-like corpus
//! with the mechanics that matter for this pipeline: a vocabulary in the tens
//! of thousands with realistic word endings, Zipf-heavy function words, and
//! stanzas whose line endings rhyme (words sharing a suffix family co-occur
//! near each other and with the family's recurring theme words).
//!
//! Useful for trying the pipeline end to end without hunting for a corpus,
//! and for the integration test fixtures.

use rhymevec::rng::Rng;
use std::collections::HashSet;

/// Size and seed of the generated corpus.
#[derive(Clone, Copy, Debug)]
pub struct CorpusSpec {
    /// Approximate number of word tokens to emit (the generator finishes the
    /// current stanza, so the total can overshoot slightly).
    pub tokens: usize,
    pub seed: u64,
}

const FUNCTION_WORDS: &[&str] = &[
    "the", "and", "of", "to", "a", "in", "that", "with", "for", "on", "as", "by", "at", "from",
    "but", "not", "all", "this", "when", "so", "now", "then", "o", "my",
];

// Rhyme-family endings: each family's line-end words share one of these.
const SUFFIXES: &[&str] = &[
    "ight", "ate", "ation", "ound", "ore", "ell", "ain", "ame", "ine", "eep", "ood", "ush",
    "ump", "ock", "est", "art", "ird", "own", "ead", "eat", "ice", "ide", "ile", "ime", "ire",
    "ise", "ite", "ive", "oad", "ode", "old", "ole", "ome", "one", "ong", "ook", "ool", "oom",
    "oon", "oop", "oot", "ope", "orn", "ose", "oss", "ost", "ote", "oud", "ouse", "ove", "owl",
    "uck", "ude", "uff", "ule", "une", "ung", "unk", "unt", "ure", "urn", "use", "ust", "ute",
    "ale", "all", "ance", "and", "ane", "ang", "ank", "ant", "ape", "ard", "are", "ark", "arm",
    "ash", "ask", "ass", "ave", "awn", "aze", "ace", "ack", "ade", "age", "aid", "ail", "aim",
    "air", "ake", "alk", "eal", "eam", "ean", "ear", "ease", "east", "eck", "eed", "eek", "eel",
    "eem", "een", "eer", "eet", "eld", "elf", "elp", "elt", "end", "ent", "ept", "ern", "ess",
    "etch", "ew", "ibe", "ick", "ift", "ike", "ild", "ill", "ilt", "ink", "int", "ipe", "irl",
    "irth", "ish", "isk", "iss", "ist", "itch", "ize", "oach", "oak", "oal", "oam", "oan",
    "oar", "oast", "obe", "og", "oil", "oin", "oke", "olt", "ond", "oof", "oop", "ord", "ork",
    "orm", "ort", "otch", "ouch", "ough", "oul", "ount", "ourn", "outh", "ow", "ox", "oy",
    "ub", "udge", "ug", "um", "un", "up", "urb", "urd", "urge", "url", "urse", "urt", "ushe",
    "usk", "utch", "ye", "ard", "ingle", "umble", "attle", "ettle", "ition", "ollow", "arrow",
    "ellow", "ender", "inder", "onder", "aster", "ister", "ustle", "iggle", "oggle", "ibble",
];

const ONSETS: &[&str] = &[
    "b", "bl", "br", "c", "ch", "cl", "cr", "d", "dr", "f", "fl", "fr", "g", "gl", "gr", "h",
    "j", "k", "l", "m", "n", "p", "pl", "pr", "qu", "r", "s", "sc", "sh", "sk", "sl", "sm",
    "sn", "sp", "st", "str", "sw", "t", "th", "tr", "tw", "v", "w", "wh", "wr", "y", "z",
    "spr", "scr", "shr",
];

const PREFIXES: &[&str] = &[
    "de", "re", "un", "be", "a", "con", "per", "dis", "mis", "pre", "pro", "sub", "in", "over",
    "under", "out", "up", "en", "em", "inter", "fore", "mid",
];

const NUCLEI: &[&str] = &[
    "a", "e", "i", "o", "u", "ai", "ea", "ee", "oa", "oo", "ou", "ie", "ay", "oy", "ow",
];

const CODAS: &[&str] = &[
    "", "b", "ck", "d", "ft", "g", "k", "l", "ll", "m", "mp", "n", "nd", "ng", "nk", "nt", "p",
    "r", "rd", "rk", "rm", "rn", "rt", "s", "sh", "sk", "st", "t", "th", "x", "z", "ss", "tch",
];

const FILLER_ENDINGS: &[&str] = &["", "", "", "s", "ed", "ing", "er", "ly", "y"];

const MEMBERS_PER_FAMILY: usize = 48;
const FILLER_POOL: usize = 6200;
const TOPICS_PER_FAMILY: usize = 4;

/// A shuffled cycling deck: items come out in random order, every item once
/// per cycle, reshuffling between cycles. This guarantees pool coverage.
struct Deck<T: Clone> {
    items: Vec<T>,
    pos: usize,
}

impl<T: Clone> Deck<T> {
    fn new(mut items: Vec<T>, rng: &mut Rng) -> Deck<T> {
        rng.shuffle(&mut items);
        Deck { items, pos: 0 }
    }

    fn next(&mut self, rng: &mut Rng) -> T {
        if self.pos == self.items.len() {
            rng.shuffle(&mut self.items);
            self.pos = 0;
        }
        let item = self.items[self.pos].clone();
        self.pos += 1;
        item
    }
}

struct Family {
    members: Deck<String>,
    topics: Vec<String>,
}

fn filler_word(rng: &mut Rng) -> String {
    let mut w = String::new();
    let syllables = if rng.next_f64() < 0.45 { 2 } else { 1 };
    for _ in 0..syllables {
        w.push_str(ONSETS[rng.below(ONSETS.len() as u64) as usize]);
        w.push_str(NUCLEI[rng.below(NUCLEI.len() as u64) as usize]);
        w.push_str(CODAS[rng.below(CODAS.len() as u64) as usize]);
    }
    w.push_str(FILLER_ENDINGS[rng.below(FILLER_ENDINGS.len() as u64) as usize]);
    w
}

pub fn generate_poetry_corpus(spec: &CorpusSpec) -> String {
    let mut rng = Rng::seed_from(spec.seed);
    let mut used: HashSet<String> = FUNCTION_WORDS.iter().map(|s| s.to_string()).collect();

    // Distinct suffixes only; duplicates in the list would merge families.
    let mut suffixes: Vec<&str> = Vec::new();
    for s in SUFFIXES {
        if !suffixes.contains(s) {
            suffixes.push(s);
        }
    }

    // Family members: onset + suffix, sometimes with a prefix syllable.
    let mut family_words: Vec<Vec<String>> = Vec::with_capacity(suffixes.len());
    for suffix in &suffixes {
        let mut onset_deck = Deck::new((0..ONSETS.len()).collect::<Vec<_>>(), &mut rng);
        let mut members = Vec::with_capacity(MEMBERS_PER_FAMILY);
        let mut attempts = 0;
        while members.len() < MEMBERS_PER_FAMILY && attempts < MEMBERS_PER_FAMILY * 4 {
            attempts += 1;
            let onset = ONSETS[onset_deck.next(&mut rng)];
            let mut word = String::new();
            if rng.next_f64() < 0.35 {
                word.push_str(PREFIXES[rng.below(PREFIXES.len() as u64) as usize]);
            }
            word.push_str(onset);
            word.push_str(suffix);
            if used.insert(word.clone()) {
                members.push(word);
            }
        }
        family_words.push(members);
    }

    // Filler vocabulary.
    let mut fillers: Vec<String> = Vec::with_capacity(FILLER_POOL);
    let mut attempts = 0;
    while fillers.len() < FILLER_POOL && attempts < FILLER_POOL * 20 {
        attempts += 1;
        let w = filler_word(&mut rng);
        if used.insert(w.clone()) {
            fillers.push(w);
        }
    }

    let mut filler_deck = Deck::new(fillers.clone(), &mut rng);
    let mut topic_deck = Deck::new(fillers, &mut rng);
    let mut families: Vec<Family> = family_words
        .into_iter()
        .map(|members| Family {
            members: Deck::new(members, &mut rng),
            topics: (0..TOPICS_PER_FAMILY)
                .map(|_| topic_deck.next(&mut rng))
                .collect(),
        })
        .collect();
    let mut family_deck = Deck::new((0..families.len()).collect::<Vec<_>>(), &mut rng);
    let mut function_deck = Deck::new(
        FUNCTION_WORDS.iter().map(|s| s.to_string()).collect(),
        &mut rng,
    );

    let mut out = String::with_capacity(spec.tokens * 7);
    let mut emitted = 0usize;

    while emitted < spec.tokens {
        // One stanza: two couplets, AABB.
        let fam_a = family_deck.next(&mut rng);
        let fam_b = family_deck.next(&mut rng);
        for line in 0..4 {
            let fam = if line < 2 { fam_a } else { fam_b };
            let interior = 4 + rng.below(3) as usize;
            for slot in 0..interior {
                if slot > 0 {
                    out.push(' ');
                }
                let r = rng.next_f64();
                let word = if r < 0.33 {
                    function_deck.next(&mut rng)
                } else if r < 0.63 {
                    let t = rng.below(TOPICS_PER_FAMILY as u64) as usize;
                    families[fam].topics[t].clone()
                } else {
                    filler_deck.next(&mut rng)
                };
                out.push_str(&word);
            }
            out.push(' ');
            out.push_str(&families[fam].members.next(&mut rng));
            out.push('\n');
            emitted += interior + 1;
        }
        out.push('\n');
    }
    out
}
