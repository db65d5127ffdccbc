//! Pipeline configuration: built-in defaults, overridden by an optional
//! line-oriented `key = value` config file, overridden by command-line flags.
//! The effective configuration (with resolved seeds) is echoed verbatim into
//! the report so a run can be reproduced exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rhymevec::embedding::{Method, TrainConfig, Word2VecMode};
use rhymevec::error::{Error, Result};

/// Everything a full pipeline run needs.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub corpora: Vec<PathBuf>,
    pub methods: Vec<Method>,
    pub train: TrainConfig,
    pub k: usize,
    pub max_iters: usize,
    pub sentence_breaks: bool,
    pub seed_embedding: Option<u64>,
    pub seed_clustering: Option<u64>,
    pub seed_baseline: Option<u64>,
    pub ipa_lexicon: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpora: Vec::new(),
            methods: vec![Method::Word2Vec, Method::Glove],
            train: TrainConfig::default(),
            k: 1000,
            max_iters: 100,
            sentence_breaks: false,
            seed_embedding: None,
            seed_clustering: None,
            seed_baseline: None,
            ipa_lexicon: None,
            out_dir: PathBuf::from("out"),
        }
    }
}

/// Command-line values that take precedence over the config file; `None`
/// means the flag was not given.
#[derive(Clone, Debug, Default)]
pub struct ConfigOverrides {
    pub corpora: Vec<PathBuf>,
    pub methods: Option<Vec<Method>>,
    pub dim: Option<usize>,
    pub window: Option<usize>,
    pub min_count: Option<u64>,
    pub mode: Option<Word2VecMode>,
    pub negative: Option<usize>,
    pub epochs: Option<usize>,
    pub alpha: Option<f64>,
    pub min_alpha: Option<f64>,
    pub subsample: Option<f64>,
    pub x_max: Option<f64>,
    pub glove_alpha: Option<f64>,
    pub glove_iters: Option<usize>,
    pub glove_eta: Option<f64>,
    pub k: Option<usize>,
    pub max_iters: Option<usize>,
    pub sentence_breaks: bool,
    pub threads: Option<usize>,
    pub seed_embedding: Option<u64>,
    pub seed_clustering: Option<u64>,
    pub seed_baseline: Option<u64>,
    pub ipa_lexicon: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

const VALID_KEYS: &[&str] = &[
    "corpora",
    "methods",
    "out_dir",
    "dim",
    "window",
    "min_count",
    "mode",
    "negative",
    "epochs",
    "alpha",
    "min_alpha",
    "subsample",
    "x_max",
    "glove_alpha",
    "glove_iters",
    "glove_eta",
    "k",
    "max_iters",
    "sentence_breaks",
    "threads",
    "ipa_lexicon",
    "seed_embedding",
    "seed_clustering",
    "seed_baseline",
];

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {value:?} for key {key:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "1" => Ok(true),
        "false" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "cannot parse {value:?} for key {key:?} (expected true or false)"
        ))),
    }
}

fn parse_seed(key: &str, value: &str) -> Result<Option<u64>> {
    if value.is_empty() {
        return Ok(None);
    }
    parse_value(key, value).map(Some)
}

fn parse_methods(value: &str) -> Result<Vec<Method>> {
    let mut methods = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let m: Method = part.parse()?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        return Err(Error::Config("methods list is empty".into()));
    }
    Ok(methods)
}

impl PipelineConfig {
    fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "corpora" => {
                self.corpora = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect();
            }
            "methods" => self.methods = parse_methods(value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "dim" => self.train.dim = parse_value(key, value)?,
            "window" => self.train.window = parse_value(key, value)?,
            "min_count" => self.train.min_count = parse_value(key, value)?,
            "mode" => self.train.mode = value.parse()?,
            "negative" => self.train.negative = parse_value(key, value)?,
            "epochs" => self.train.epochs = parse_value(key, value)?,
            "alpha" => self.train.initial_alpha = parse_value(key, value)?,
            "min_alpha" => self.train.min_alpha = parse_value(key, value)?,
            "subsample" => self.train.subsample = parse_value(key, value)?,
            "x_max" => self.train.glove_x_max = parse_value(key, value)?,
            "glove_alpha" => self.train.glove_alpha = parse_value(key, value)?,
            "glove_iters" => self.train.glove_iters = parse_value(key, value)?,
            "glove_eta" => self.train.glove_eta = parse_value(key, value)?,
            "k" => self.k = parse_value(key, value)?,
            "max_iters" => self.max_iters = parse_value(key, value)?,
            "sentence_breaks" => self.sentence_breaks = parse_bool(key, value)?,
            "threads" => self.train.threads = parse_value(key, value)?,
            "ipa_lexicon" => {
                self.ipa_lexicon = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                };
            }
            "seed_embedding" => self.seed_embedding = parse_seed(key, value)?,
            "seed_clustering" => self.seed_clustering = parse_seed(key, value)?,
            "seed_baseline" => self.seed_baseline = parse_seed(key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown config key {other:?}; valid keys: {}",
                    VALID_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Applies a `key = value` config file on top of the current values.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "config line {} is not of the form key = value: {line:?}",
                    lineno + 1
                ))
            })?;
            self.apply_key(key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn apply_overrides(&mut self, o: &ConfigOverrides) {
        if !o.corpora.is_empty() {
            self.corpora = o.corpora.clone();
        }
        if let Some(m) = &o.methods {
            self.methods = m.clone();
        }
        macro_rules! set {
            ($field:expr, $opt:expr) => {
                if let Some(v) = $opt {
                    $field = v;
                }
            };
        }
        set!(self.train.dim, o.dim);
        set!(self.train.window, o.window);
        set!(self.train.min_count, o.min_count);
        set!(self.train.mode, o.mode);
        set!(self.train.negative, o.negative);
        set!(self.train.epochs, o.epochs);
        set!(self.train.initial_alpha, o.alpha);
        set!(self.train.min_alpha, o.min_alpha);
        set!(self.train.subsample, o.subsample);
        set!(self.train.glove_x_max, o.x_max);
        set!(self.train.glove_alpha, o.glove_alpha);
        set!(self.train.glove_iters, o.glove_iters);
        set!(self.train.glove_eta, o.glove_eta);
        set!(self.k, o.k);
        set!(self.max_iters, o.max_iters);
        set!(self.train.threads, o.threads);
        if o.sentence_breaks {
            self.sentence_breaks = true;
        }
        if o.seed_embedding.is_some() {
            self.seed_embedding = o.seed_embedding;
        }
        if o.seed_clustering.is_some() {
            self.seed_clustering = o.seed_clustering;
        }
        if o.seed_baseline.is_some() {
            self.seed_baseline = o.seed_baseline;
        }
        if o.ipa_lexicon.is_some() {
            self.ipa_lexicon = o.ipa_lexicon.clone();
        }
        if let Some(dir) = &o.out_dir {
            self.out_dir = dir.clone();
        }
    }

    /// Defaults, then the config file, then explicit flags.
    pub fn resolve(file: Option<&Path>, overrides: &ConfigOverrides) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_file_text(&text)?;
        }
        cfg.apply_overrides(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        if self.corpora.is_empty() {
            return Err(Error::Config("no corpus files given".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no embedding methods selected".into()));
        }
        if self.k < 1 || self.max_iters < 1 {
            return Err(Error::Config("k and max_iters must be at least 1".into()));
        }
        Ok(())
    }

    /// Draws any missing seeds from system entropy, so the echoed config
    /// fully determines the run.
    pub fn resolve_seeds(&mut self) {
        self.seed_embedding.get_or_insert_with(entropy_seed);
        self.seed_clustering.get_or_insert_with(entropy_seed);
        self.seed_baseline.get_or_insert_with(entropy_seed);
    }

    /// The configuration echo: `(key, value)` pairs in a fixed order, using
    /// exactly the config-file keys, so a report can be replayed as a config
    /// file.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut corpora = String::new();
        for (i, p) in self.corpora.iter().enumerate() {
            if i > 0 {
                corpora.push(',');
            }
            let _ = write!(corpora, "{}", p.display());
        }
        let methods = self
            .methods
            .iter()
            .map(|m| m.as_str())
            .collect::<Vec<_>>()
            .join(",");
        let seed = |s: Option<u64>| s.map(|v| v.to_string()).unwrap_or_default();

        vec![
            ("corpora".into(), corpora),
            ("methods".into(), methods),
            ("out_dir".into(), self.out_dir.display().to_string()),
            ("dim".into(), self.train.dim.to_string()),
            ("window".into(), self.train.window.to_string()),
            ("min_count".into(), self.train.min_count.to_string()),
            ("mode".into(), self.train.mode.as_str().into()),
            ("negative".into(), self.train.negative.to_string()),
            ("epochs".into(), self.train.epochs.to_string()),
            ("alpha".into(), self.train.initial_alpha.to_string()),
            ("min_alpha".into(), self.train.min_alpha.to_string()),
            ("subsample".into(), self.train.subsample.to_string()),
            ("x_max".into(), self.train.glove_x_max.to_string()),
            ("glove_alpha".into(), self.train.glove_alpha.to_string()),
            ("glove_iters".into(), self.train.glove_iters.to_string()),
            ("glove_eta".into(), self.train.glove_eta.to_string()),
            ("k".into(), self.k.to_string()),
            ("max_iters".into(), self.max_iters.to_string()),
            ("sentence_breaks".into(), self.sentence_breaks.to_string()),
            ("threads".into(), self.train.threads.to_string()),
            (
                "ipa_lexicon".into(),
                self.ipa_lexicon
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
            ("seed_embedding".into(), seed(self.seed_embedding)),
            ("seed_clustering".into(), seed(self.seed_clustering)),
            ("seed_baseline".into(), seed(self.seed_baseline)),
        ]
    }
}

/// A 64-bit seed from the OS entropy pool, falling back to the clock.
pub fn entropy_seed() -> u64 {
    if let Ok(bytes) = std::fs::read("/dev/urandom") {
        if bytes.len() >= 8 {
            return u64::from_le_bytes(bytes[..8].try_into().unwrap());
        }
    }
    match std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH) {
        Ok(d) => d.as_nanos() as u64,
        Err(_) => 0x5eed,
    }
}
