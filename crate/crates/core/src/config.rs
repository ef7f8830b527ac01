//! Run configuration: a flat `key = value` file with optional `[section]`
//! headers.
//!
//! ```text
//! [data]
//! train = data/train.conll
//! dev = data/dev.conll
//!
//! [vectorize]
//! doc_mode = concatenated
//!
//! [model]
//! kind = svm
//! ```
//!
//! Keys are unique across sections, so the same names double as
//! command-line flags (`--kind svm`). Lines starting with `#` or `;` are
//! comments.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::corpus::LangTag;
use crate::error::{Error, Result};
use crate::models::{ModelKind, TrainConfig};
use crate::preprocess::PipelineConfig;
use crate::vectorize::{Analyzer, DocMode};

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "CODEMIX_SEED";

/// Every recognised key with its section.
pub const KEYS: &[(&str, &str)] = &[
    ("data", "train"),
    ("data", "dev"),
    ("data", "aux"),
    ("data", "aux_label_column"),
    ("data", "aux_text_column"),
    ("data", "aux_lang"),
    ("data", "lexicon"),
    ("data", "out"),
    ("preprocess", "replace_emoji"),
    ("preprocess", "remove_mentions"),
    ("preprocess", "remove_non_ascii"),
    ("preprocess", "replace_urls"),
    ("preprocess", "collapse_elongation"),
    ("preprocess", "segment_hashtags"),
    ("preprocess", "elongation_min_run"),
    ("vectorize", "doc_mode"),
    ("vectorize", "word_ngram_min"),
    ("vectorize", "word_ngram_max"),
    ("vectorize", "char_ngram_min"),
    ("vectorize", "char_ngram_max"),
    ("model", "kind"),
    ("model", "l2_lambda"),
    ("model", "learning_rate"),
    ("model", "epochs"),
    ("model", "batch_size"),
    ("model", "mnb_alpha"),
    ("run", "seed"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub train: Option<PathBuf>,
    pub dev: Option<PathBuf>,
    pub aux: Option<PathBuf>,
    pub aux_label_column: String,
    pub aux_text_column: String,
    pub aux_lang: LangTag,
    /// `None` selects the bundled lexicon.
    pub lexicon: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub pipeline: PipelineConfig,
    pub doc_mode: DocMode,
    pub word_ngrams: (usize, usize),
    pub char_ngrams: (usize, usize),
    pub kind: ModelKind,
    pub l2_lambda: Option<f64>,
    pub learning_rate: Option<f64>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub mnb_alpha: Option<f64>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            train: None,
            dev: None,
            aux: None,
            aux_label_column: "label".to_string(),
            aux_text_column: "text".to_string(),
            aux_lang: LangTag::Lang1,
            lexicon: None,
            out: None,
            pipeline: PipelineConfig::default(),
            doc_mode: DocMode::PerClassConcatenated,
            word_ngrams: (1, 1),
            char_ngrams: (2, 5),
            kind: ModelKind::Svm,
            l2_lambda: None,
            learning_rate: None,
            epochs: None,
            batch_size: None,
            mnb_alpha: None,
            seed: 42,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn section_of(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(_, k)| *k == key).map(|(s, _)| *s)
}

impl RunConfig {
    /// Parses a config file body on top of the defaults.
    pub fn from_ini_str(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        cfg.apply_ini_str(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_ini_str(&text)
    }

    pub fn apply_ini_str(&mut self, text: &str) -> Result<()> {
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let at = |msg: String| Error::Config(format!("line {}: {msg}", idx + 1));
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| at(format!("unterminated section header {line:?}")))?
                    .trim();
                if !KEYS.iter().any(|(s, _)| *s == name) {
                    return Err(at(format!("unknown section [{name}]")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected key = value, found {line:?}")))?;
            let key = key.trim();
            let expected = section_of(key).ok_or_else(|| at(format!("unknown key {key:?}")))?;
            if let Some(s) = &section {
                if s != expected {
                    return Err(at(format!("key {key:?} belongs in [{expected}], not [{s}]")));
                }
            }
            self.set(key, value.trim()).map_err(|e| match e {
                Error::Config(m) => at(m),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let path = || (!value.is_empty()).then(|| PathBuf::from(value));
        match key {
            "train" => self.train = path(),
            "dev" => self.dev = path(),
            "aux" => self.aux = path(),
            "aux_label_column" => self.aux_label_column = value.to_string(),
            "aux_text_column" => self.aux_text_column = value.to_string(),
            "aux_lang" => {
                self.aux_lang = value
                    .parse()
                    .map_err(|e: String| Error::Config(format!("aux_lang: {e}")))?
            }
            "lexicon" => self.lexicon = path(),
            "out" => self.out = path(),
            "replace_emoji" => self.pipeline.replace_emoji = parse_bool(key, value)?,
            "remove_mentions" => self.pipeline.remove_mentions = parse_bool(key, value)?,
            "remove_non_ascii" => self.pipeline.remove_non_ascii = parse_bool(key, value)?,
            "replace_urls" => self.pipeline.replace_urls = parse_bool(key, value)?,
            "collapse_elongation" => self.pipeline.collapse_elongation = parse_bool(key, value)?,
            "segment_hashtags" => self.pipeline.segment_hashtags = parse_bool(key, value)?,
            "elongation_min_run" => self.pipeline.elongation_min_run = parse_num(key, value)?,
            "doc_mode" => self.doc_mode = value.parse().map_err(Error::Config)?,
            "word_ngram_min" => self.word_ngrams.0 = parse_num(key, value)?,
            "word_ngram_max" => self.word_ngrams.1 = parse_num(key, value)?,
            "char_ngram_min" => self.char_ngrams.0 = parse_num(key, value)?,
            "char_ngram_max" => self.char_ngrams.1 = parse_num(key, value)?,
            "kind" => self.kind = value.parse().map_err(Error::Config)?,
            "l2_lambda" => self.l2_lambda = Some(parse_num(key, value)?),
            "learning_rate" => self.learning_rate = Some(parse_num(key, value)?),
            "epochs" => self.epochs = Some(parse_num(key, value)?),
            "batch_size" => self.batch_size = Some(parse_num(key, value)?),
            "mnb_alpha" => self.mnb_alpha = Some(parse_num(key, value)?),
            "seed" => self.seed = parse_num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies [`SEED_ENV`] if it is set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(seed) = std::env::var(SEED_ENV) {
            self.seed = parse_num(SEED_ENV, seed.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.pipeline.validate().map_err(Error::Config)?;
        self.word_analyzer()?;
        self.char_analyzer()?;
        for kind in ModelKind::ALL {
            self.train_config(kind).validate()?;
        }
        Ok(())
    }

    pub fn word_analyzer(&self) -> Result<Analyzer> {
        Analyzer::word(self.word_ngrams.0, self.word_ngrams.1).map_err(|e| Error::Config(format!("word n-grams: {e}")))
    }

    pub fn char_analyzer(&self) -> Result<Analyzer> {
        Analyzer::char(self.char_ngrams.0, self.char_ngrams.1).map_err(|e| Error::Config(format!("char n-grams: {e}")))
    }

    /// Training hyperparameters for `kind`: per-kind defaults with any
    /// configured overrides applied.
    pub fn train_config(&self, kind: ModelKind) -> TrainConfig {
        let mut t = TrainConfig::new(kind);
        if let Some(v) = self.l2_lambda {
            t.l2_lambda = v;
        }
        if let Some(v) = self.learning_rate {
            t.learning_rate = v;
        }
        if let Some(v) = self.epochs {
            t.epochs = v;
        }
        if let Some(v) = self.batch_size {
            t.batch_size = v;
        }
        if let Some(v) = self.mnb_alpha {
            t.mnb_alpha = v;
        }
        t.seed = self.seed;
        t
    }

    /// Returns the path stored under `key`, checking that it exists.
    pub fn require_path<'a>(&self, key: &str, value: &'a Option<PathBuf>) -> Result<&'a Path> {
        let path = value
            .as_deref()
            .ok_or_else(|| Error::Config(format!("{key} path is not set")))?;
        if !path.exists() {
            return Err(Error::Config(format!("{key} path {} does not exist", path.display())));
        }
        Ok(path)
    }

    /// Canonical serialisation: every section, every set key, fixed order.
    pub fn to_ini(&self) -> String {
        let p = |v: &Option<PathBuf>| v.as_ref().map(|p| p.display().to_string());
        let f = |v: Option<f64>| v.map(|x| format!("{x:?}"));
        let u = |v: Option<usize>| v.map(|x| x.to_string());
        let values: Vec<(&str, Option<String>)> = vec![
            ("train", p(&self.train)),
            ("dev", p(&self.dev)),
            ("aux", p(&self.aux)),
            ("aux_label_column", Some(self.aux_label_column.clone())),
            ("aux_text_column", Some(self.aux_text_column.clone())),
            ("aux_lang", Some(self.aux_lang.to_string())),
            ("lexicon", p(&self.lexicon)),
            ("out", p(&self.out)),
            ("replace_emoji", Some(self.pipeline.replace_emoji.to_string())),
            ("remove_mentions", Some(self.pipeline.remove_mentions.to_string())),
            ("remove_non_ascii", Some(self.pipeline.remove_non_ascii.to_string())),
            ("replace_urls", Some(self.pipeline.replace_urls.to_string())),
            ("collapse_elongation", Some(self.pipeline.collapse_elongation.to_string())),
            ("segment_hashtags", Some(self.pipeline.segment_hashtags.to_string())),
            ("elongation_min_run", Some(self.pipeline.elongation_min_run.to_string())),
            ("doc_mode", Some(self.doc_mode.to_string())),
            ("word_ngram_min", Some(self.word_ngrams.0.to_string())),
            ("word_ngram_max", Some(self.word_ngrams.1.to_string())),
            ("char_ngram_min", Some(self.char_ngrams.0.to_string())),
            ("char_ngram_max", Some(self.char_ngrams.1.to_string())),
            ("kind", Some(self.kind.to_string())),
            ("l2_lambda", f(self.l2_lambda)),
            ("learning_rate", f(self.learning_rate)),
            ("epochs", u(self.epochs)),
            ("batch_size", u(self.batch_size)),
            ("mnb_alpha", f(self.mnb_alpha)),
            ("seed", Some(self.seed.to_string())),
        ];
        let mut out = String::new();
        let mut current = "";
        for (key, value) in values {
            let section = section_of(key).expect("known key");
            if section != current {
                if !current.is_empty() {
                    out.push('\n');
                }
                let _ = writeln!(out, "[{section}]");
                current = section;
            }
            if let Some(v) = value {
                let _ = writeln!(out, "{key} = {v}");
            }
        }
        out
    }

    /// Hex SHA-256 of [`RunConfig::to_ini`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_ini().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}
