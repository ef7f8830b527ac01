//! End-to-end training, evaluation and prediction built from a
//! [`RunConfig`]; the `codemix` binary is a thin wrapper around this module.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::corpus::{self, Dataset, Sentiment};
use crate::error::{Error, Result};
use crate::eval::{self, EvalReport, GridRow};
use crate::models::{self, Classifier, ModelKind};
use crate::preprocess::{run_pipeline, EmojiLexicon, PipelineConfig};
use crate::vectorize::{prepare_documents, DocMode, SparseVector, TfIdfModel};

pub const VECTORIZER_FILE: &str = "vectorizer.tfidf";
pub const MODEL_FILE: &str = "model.txt";
pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const CONFIG_FILE: &str = "run.conf";
pub const MANIFEST_FILE: &str = "manifest.txt";

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Reads a tweet-block file; the dataset is named after `name`.
pub fn load_dataset(path: &Path, name: &str) -> Result<Dataset> {
    corpus::parse_conll_str(name, &read_file(path)?)
}

pub fn load_lexicon(cfg: &RunConfig) -> Result<EmojiLexicon> {
    match &cfg.lexicon {
        None => Ok(EmojiLexicon::bundled()),
        Some(_) => {
            let path = cfg.require_path("lexicon", &cfg.lexicon)?;
            EmojiLexicon::parse(&read_file(path)?)
        }
    }
}

/// Training data: the code-mixed train split, plus the auxiliary
/// monolingual CSV when one is configured. Also returns the number of
/// auxiliary tweets.
pub fn load_training_data(cfg: &RunConfig) -> Result<(Dataset, usize)> {
    let train = load_dataset(cfg.require_path("train", &cfg.train)?, "train")?;
    match &cfg.aux {
        None => Ok((train, 0)),
        Some(_) => {
            let path = cfg.require_path("aux", &cfg.aux)?;
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            let aux = corpus::parse_monolingual_csv("aux", file, &cfg.aux_label_column, &cfg.aux_text_column, cfg.aux_lang)?;
            Ok((corpus::concat_datasets(&train, &aux), aux.len()))
        }
    }
}

pub fn preprocess_dataset(dataset: &Dataset, pipeline: &PipelineConfig, lexicon: &EmojiLexicon) -> Vec<String> {
    dataset
        .iter()
        .map(|t| run_pipeline(&t.text(), pipeline, lexicon))
        .collect()
}

/// Preprocessing settings, fitted vectorizer and classifier.
#[derive(Debug, Clone)]
pub struct TrainedSystem {
    pub pipeline: PipelineConfig,
    pub lexicon: EmojiLexicon,
    pub vectorizer: TfIdfModel,
    pub classifier: Classifier,
}

fn fit_vectorizer(cfg: &RunConfig, dataset: &Dataset, texts: &[String], mode: DocMode) -> Result<TfIdfModel> {
    let docs = prepare_documents(dataset, mode, texts)?;
    TfIdfModel::fit(&docs, cfg.word_analyzer()?, cfg.char_analyzer()?, mode)
}

impl TrainedSystem {
    /// Fits the vectorizer (in `cfg.doc_mode`) and a `cfg.kind` classifier
    /// on `dataset`.
    pub fn train(cfg: &RunConfig, lexicon: EmojiLexicon, dataset: &Dataset) -> Result<TrainedSystem> {
        cfg.validate()?;
        let labels = dataset.labels()?;
        let texts = preprocess_dataset(dataset, &cfg.pipeline, &lexicon);
        let vectorizer = fit_vectorizer(cfg, dataset, &texts, cfg.doc_mode)?;
        let x = vectorizer.transform_batch(&texts);
        let classifier = models::fit(&x, &labels, &cfg.train_config(cfg.kind))?;
        Ok(TrainedSystem {
            pipeline: cfg.pipeline,
            lexicon,
            vectorizer,
            classifier,
        })
    }

    pub fn vectorize(&self, dataset: &Dataset) -> Vec<SparseVector> {
        let texts = preprocess_dataset(dataset, &self.pipeline, &self.lexicon);
        self.vectorizer.transform_batch(&texts)
    }

    pub fn predict(&self, dataset: &Dataset) -> Result<Vec<Sentiment>> {
        self.classifier.predict_batch(&self.vectorize(dataset))
    }

    pub fn evaluate(&self, dataset: &Dataset) -> Result<EvalReport> {
        let gold = dataset.labels()?;
        let pred = self.predict(dataset)?;
        eval::score(&gold, &pred)
    }

    /// Writes the artifacts, the resolved config and a run manifest into
    /// `dir`. Output is a pure function of the inputs.
    pub fn save(&self, dir: &Path, cfg: &RunConfig, train_size: usize, aux_size: usize) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_file(&dir.join(VECTORIZER_FILE), &self.vectorizer.to_text())?;
        write_file(&dir.join(MODEL_FILE), &self.classifier.to_text())?;
        write_file(&dir.join(LEXICON_FILE), &self.lexicon.to_tsv())?;
        write_file(&dir.join(CONFIG_FILE), &cfg.to_ini())?;

        let mut manifest = String::from("codemix manifest v1\n");
        let _ = writeln!(manifest, "config_sha256={}", cfg.hash());
        let _ = writeln!(manifest, "seed={}", cfg.seed);
        let _ = writeln!(manifest, "kind={}", self.classifier.kind());
        let _ = writeln!(manifest, "doc_mode={}", self.vectorizer.mode());
        let _ = writeln!(manifest, "train_size={train_size}");
        let _ = writeln!(manifest, "aux_size={aux_size}");
        let _ = writeln!(manifest, "word_vocab={}", self.vectorizer.word_vocab().len());
        let _ = writeln!(manifest, "char_vocab={}", self.vectorizer.char_vocab().len());
        let _ = writeln!(manifest, "dimension={}", self.vectorizer.dimension());
        write_file(&dir.join(MANIFEST_FILE), &manifest)
    }

    pub fn load(dir: &Path) -> Result<TrainedSystem> {
        let cfg = RunConfig::from_ini_str(&read_file(&dir.join(CONFIG_FILE))?)?;
        let lexicon = EmojiLexicon::parse(&read_file(&dir.join(LEXICON_FILE))?)?;
        let vectorizer = TfIdfModel::from_text(&read_file(&dir.join(VECTORIZER_FILE))?)?;
        let classifier = Classifier::from_text(&read_file(&dir.join(MODEL_FILE))?)?;
        if classifier.dimension() != vectorizer.dimension() {
            return Err(Error::DimensionMismatch {
                expected: vectorizer.dimension(),
                found: classifier.dimension(),
            });
        }
        Ok(TrainedSystem {
            pipeline: cfg.pipeline,
            lexicon,
            vectorizer,
            classifier,
        })
    }
}

/// `train` subcommand: fit on the configured training data and persist
/// into `cfg.out`.
pub fn cmd_train(cfg: &RunConfig) -> Result<TrainedSystem> {
    cfg.validate()?;
    let out = cfg
        .out
        .as_deref()
        .ok_or_else(|| Error::Config("out directory is not set".to_string()))?;
    let lexicon = load_lexicon(cfg)?;
    let (data, aux_size) = load_training_data(cfg)?;
    let system = TrainedSystem::train(cfg, lexicon, &data)?;
    system.save(out, cfg, data.len() - aux_size, aux_size)?;
    Ok(system)
}

/// Prediction file body: one `{id}\t{label}` line per tweet.
pub fn format_predictions(dataset: &Dataset, labels: &[Sentiment]) -> String {
    let mut out = String::new();
    for (tweet, label) in dataset.iter().zip(labels) {
        let _ = writeln!(out, "{}\t{label}", tweet.id);
    }
    out
}

pub fn cmd_predict(model_dir: &Path, data: &Path, output: &Path) -> Result<usize> {
    let system = TrainedSystem::load(model_dir)?;
    let dataset = load_dataset(data, "predict")?;
    let labels = system.predict(&dataset)?;
    write_file(output, &format_predictions(&dataset, &labels))?;
    Ok(labels.len())
}

/// One cell of the model x document-mode comparison.
#[derive(Debug, Clone)]
pub struct GridCell {
    pub kind: ModelKind,
    pub mode: DocMode,
    pub report: EvalReport,
}

impl GridCell {
    pub fn row(&self) -> GridRow {
        GridRow::new(self.kind.display_name(), self.mode.label(), self.report.macro_f1)
    }
}

/// Trains all three classifiers under both document modes on the
/// training data and scores each on the dev split. Cells come back in
/// LR, MNB, SVM order with the concatenated mode first.
pub fn run_grid(cfg: &RunConfig) -> Result<Vec<GridCell>> {
    cfg.validate()?;
    let lexicon = load_lexicon(cfg)?;
    let (train, _) = load_training_data(cfg)?;
    let dev = load_dataset(cfg.require_path("dev", &cfg.dev)?, "dev")?;
    run_grid_on(cfg, &lexicon, &train, &dev)
}

pub fn run_grid_on(cfg: &RunConfig, lexicon: &EmojiLexicon, train: &Dataset, dev: &Dataset) -> Result<Vec<GridCell>> {
    let train_labels = train.labels()?;
    let dev_labels = dev.labels()?;
    let train_texts = preprocess_dataset(train, &cfg.pipeline, lexicon);
    let dev_texts = preprocess_dataset(dev, &cfg.pipeline, lexicon);

    let features = DocMode::ALL
        .par_iter()
        .map(|&mode| {
            let vectorizer = fit_vectorizer(cfg, train, &train_texts, mode)?;
            Ok((mode, vectorizer.transform_batch(&train_texts), vectorizer.transform_batch(&dev_texts)))
        })
        .collect::<Result<Vec<_>>>()?;

    let cells: Vec<(ModelKind, usize)> = ModelKind::ALL
        .iter()
        .flat_map(|&k| (0..features.len()).map(move |m| (k, m)))
        .collect();
    cells
        .par_iter()
        .map(|&(kind, m)| {
            let (mode, x_train, x_dev) = &features[m];
            let classifier = models::fit(x_train, &train_labels, &cfg.train_config(kind))?;
            let pred = classifier.predict_batch(x_dev)?;
            Ok(GridCell {
                kind,
                mode: *mode,
                report: eval::score(&dev_labels, &pred)?,
            })
        })
        .collect()
}

/// Machine-readable grid lines: `metric.grid.{kind}.{mode}.macro_f1=...`.
pub fn grid_metrics(cells: &[GridCell]) -> String {
    let mut out = String::new();
    for c in cells {
        let _ = writeln!(out, "metric.grid.{}.{}.macro_f1={:.6}", c.kind, c.mode, c.report.macro_f1);
    }
    if let Some(best) = cells
        .iter()
        .max_by(|a, b| a.report.macro_f1.total_cmp(&b.report.macro_f1))
    {
        let _ = writeln!(out, "metric.grid.best.macro_f1={:.6}", best.report.macro_f1);
    }
    out
}
