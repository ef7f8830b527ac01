use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use codemix::config::RunConfig;
use codemix::corpus::{self, Dataset, LangTag, Sentiment, Token, Tweet};
use codemix::eval::{self, GridRow};
use codemix::pipeline::TrainedSystem;
use codemix::preprocess::{self, EmojiLexicon, PipelineConfig};
use codemix::vectorize::{prepare_documents, Analyzer, DocMode, TfIdfModel};

fn to_py(err: codemix::Error) -> PyErr {
    match err {
        codemix::Error::Io { .. } => PyIOError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_labels(labels: &[String]) -> PyResult<Vec<Sentiment>> {
    labels
        .iter()
        .map(|l| l.parse::<Sentiment>().map_err(PyValueError::new_err))
        .collect()
}

/// Whitespace-tokenised, Lang1-tagged dataset built from raw strings.
fn dataset_from_texts(texts: &[String], labels: Option<&[Sentiment]>) -> PyResult<Dataset> {
    if let Some(l) = labels {
        if l.len() != texts.len() {
            return Err(PyValueError::new_err(format!("{} texts but {} labels", texts.len(), l.len())));
        }
    }
    let mut tweets = Vec::with_capacity(texts.len());
    for (i, text) in texts.iter().enumerate() {
        let mut tokens: Vec<Token> = text
            .split_whitespace()
            .map(|w| Token::new(w, LangTag::Lang1))
            .collect::<Result<_, _>>()
            .map_err(PyValueError::new_err)?;
        if tokens.is_empty() {
            // keep empty strings representable; the placeholder is dropped by preprocessing
            tokens.push(Token::new("@", LangTag::Other).expect("valid token"));
        }
        let tweet = Tweet::new(i.to_string(), tokens, labels.map(|l| l[i])).map_err(PyValueError::new_err)?;
        tweets.push(tweet);
    }
    Dataset::new("py", tweets).map_err(to_py)
}

/// Runs the preprocessing pipeline with the bundled emoji lexicon.
#[pyfunction]
#[pyo3(signature = (
    text,
    *,
    replace_emoji = true,
    remove_mentions = true,
    remove_non_ascii = true,
    replace_urls = true,
    collapse_elongation = true,
    segment_hashtags = true,
    elongation_min_run = 3
))]
#[allow(clippy::too_many_arguments)]
fn preprocess_text(
    text: &str,
    replace_emoji: bool,
    remove_mentions: bool,
    remove_non_ascii: bool,
    replace_urls: bool,
    collapse_elongation: bool,
    segment_hashtags: bool,
    elongation_min_run: usize,
) -> PyResult<String> {
    let cfg = PipelineConfig {
        replace_emoji,
        remove_mentions,
        remove_non_ascii,
        replace_urls,
        collapse_elongation,
        segment_hashtags,
        elongation_min_run,
    };
    cfg.validate().map_err(PyValueError::new_err)?;
    Ok(preprocess::run_pipeline(text, &cfg, &EmojiLexicon::bundled()))
}

type PyTweet = (String, Vec<(String, String)>, Option<String>);

/// Parses tweet blocks into `(id, [(token, tag), ...], label | None)` tuples.
#[pyfunction]
fn parse_conll(text: &str) -> PyResult<Vec<PyTweet>> {
    let dataset = corpus::parse_conll_str("py", text).map_err(to_py)?;
    Ok(dataset
        .iter()
        .map(|t| {
            let tokens = t
                .tokens()
                .iter()
                .map(|tok| (tok.text().to_string(), tok.lang().to_string()))
                .collect();
            (t.id.clone(), tokens, t.sentiment.map(|s| s.to_string()))
        })
        .collect())
}

/// Per-class counts of a labelled block file.
#[pyfunction]
fn class_distribution(text: &str) -> PyResult<BTreeMap<String, u64>> {
    let dataset = corpus::parse_conll_str("py", text).map_err(to_py)?;
    let dist = corpus::class_distribution(&dataset).map_err(to_py)?;
    let mut out: BTreeMap<String, u64> = Sentiment::ALL.iter().map(|s| (s.to_string(), dist.get(*s))).collect();
    out.insert("total".to_string(), dist.total());
    Ok(out)
}

/// Precision/recall/F1 per class plus `macro_f1` and `accuracy`.
#[pyfunction]
fn score(gold: Vec<String>, pred: Vec<String>) -> PyResult<BTreeMap<String, f64>> {
    let report = eval::score(&parse_labels(&gold)?, &parse_labels(&pred)?).map_err(to_py)?;
    let mut out = BTreeMap::new();
    out.insert("macro_f1".to_string(), report.macro_f1);
    out.insert("accuracy".to_string(), report.accuracy);
    for s in Sentiment::ALL {
        let m = report.class(s);
        out.insert(format!("{s}.precision"), m.precision);
        out.insert(format!("{s}.recall"), m.recall);
        out.insert(format!("{s}.f1"), m.f1);
    }
    Ok(out)
}

/// Renders `(system, tfidf_input, macro_f1)` rows as an aligned table.
#[pyfunction]
fn comparison_grid(rows: Vec<(String, String, f64)>) -> String {
    let rows: Vec<GridRow> = rows.into_iter().map(|(s, m, f)| GridRow::new(s, m, f)).collect();
    eval::comparison_grid(&rows)
}

#[pyclass(module = "codemix_py")]
struct Vectorizer {
    doc_mode: DocMode,
    word: Analyzer,
    chars: Analyzer,
    model: Option<TfIdfModel>,
}

#[pymethods]
impl Vectorizer {
    #[new]
    #[pyo3(signature = (doc_mode = "all", word_ngrams = (1, 1), char_ngrams = (2, 5)))]
    fn new(doc_mode: &str, word_ngrams: (usize, usize), char_ngrams: (usize, usize)) -> PyResult<Self> {
        Ok(Vectorizer {
            doc_mode: doc_mode.parse().map_err(PyValueError::new_err)?,
            word: Analyzer::word(word_ngrams.0, word_ngrams.1).map_err(PyValueError::new_err)?,
            chars: Analyzer::char(char_ngrams.0, char_ngrams.1).map_err(PyValueError::new_err)?,
            model: None,
        })
    }

    /// Fits on already-preprocessed texts. Labels are required in
    /// `concatenated` mode.
    #[pyo3(signature = (texts, labels = None))]
    fn fit(&mut self, texts: Vec<String>, labels: Option<Vec<String>>) -> PyResult<()> {
        let labels = labels.map(|l| parse_labels(&l)).transpose()?;
        let dataset = dataset_from_texts(&texts, labels.as_deref())?;
        let docs = prepare_documents(&dataset, self.doc_mode, &texts).map_err(to_py)?;
        self.model = Some(TfIdfModel::fit(&docs, self.word, self.chars, self.doc_mode).map_err(to_py)?);
        Ok(())
    }

    #[getter]
    fn dimension(&self) -> PyResult<usize> {
        Ok(self.fitted()?.dimension())
    }

    /// Sparse `(index, weight)` pairs, L2-normalised.
    fn transform(&self, text: &str) -> PyResult<Vec<(usize, f64)>> {
        Ok(self.fitted()?.transform(text).entries().to_vec())
    }

    fn to_text(&self) -> PyResult<String> {
        Ok(self.fitted()?.to_text())
    }
}

impl Vectorizer {
    fn fitted(&self) -> PyResult<&TfIdfModel> {
        self.model
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("vectorizer is not fitted"))
    }
}

/// Preprocessing + TF-IDF + classifier trained from raw strings.
#[pyclass(module = "codemix_py")]
struct TextClassifier {
    config: RunConfig,
    system: Option<TrainedSystem>,
}

#[pymethods]
impl TextClassifier {
    #[new]
    #[pyo3(signature = (kind = "svm", doc_mode = "concatenated", seed = 42, epochs = None, learning_rate = None, l2_lambda = None, mnb_alpha = None))]
    fn new(
        kind: &str,
        doc_mode: &str,
        seed: u64,
        epochs: Option<usize>,
        learning_rate: Option<f64>,
        l2_lambda: Option<f64>,
        mnb_alpha: Option<f64>,
    ) -> PyResult<Self> {
        let mut config = RunConfig::default();
        config.set("kind", kind).map_err(to_py)?;
        config.set("doc_mode", doc_mode).map_err(to_py)?;
        config.seed = seed;
        config.epochs = epochs;
        config.learning_rate = learning_rate;
        config.l2_lambda = l2_lambda;
        config.mnb_alpha = mnb_alpha;
        config.validate().map_err(to_py)?;
        Ok(TextClassifier { config, system: None })
    }

    fn fit(&mut self, texts: Vec<String>, labels: Vec<String>) -> PyResult<()> {
        let labels = parse_labels(&labels)?;
        let dataset = dataset_from_texts(&texts, Some(&labels))?;
        let system = TrainedSystem::train(&self.config, EmojiLexicon::bundled(), &dataset).map_err(to_py)?;
        self.system = Some(system);
        Ok(())
    }

    fn predict(&self, texts: Vec<String>) -> PyResult<Vec<String>> {
        let dataset = dataset_from_texts(&texts, None)?;
        let labels = self.fitted()?.predict(&dataset).map_err(to_py)?;
        Ok(labels.into_iter().map(|s| s.to_string()).collect())
    }

    /// Raw class scores in negative, neutral, positive order.
    fn predict_scores(&self, text: String) -> PyResult<Vec<f64>> {
        let system = self.fitted()?;
        let dataset = dataset_from_texts(&[text], None)?;
        let x = system.vectorize(&dataset);
        system.classifier.predict_scores(&x[0]).map_err(to_py)
    }

    fn save(&self, directory: PathBuf) -> PyResult<()> {
        let system = self.fitted()?;
        system.save(&directory, &self.config, 0, 0).map_err(to_py)
    }

    #[staticmethod]
    fn load(directory: PathBuf) -> PyResult<Self> {
        let system = TrainedSystem::load(&directory).map_err(to_py)?;
        let config = RunConfig {
            kind: system.classifier.kind(),
            doc_mode: system.vectorizer.mode(),
            pipeline: system.pipeline,
            ..RunConfig::default()
        };
        Ok(TextClassifier {
            config,
            system: Some(system),
        })
    }

    #[getter]
    fn kind(&self) -> String {
        self.config.kind.to_string()
    }
}

impl TextClassifier {
    fn fitted(&self) -> PyResult<&TrainedSystem> {
        self.system
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("classifier is not fitted"))
    }
}

#[pymodule]
fn codemix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(preprocess_text, m)?)?;
    m.add_function(wrap_pyfunction!(parse_conll, m)?)?;
    m.add_function(wrap_pyfunction!(class_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(comparison_grid, m)?)?;
    m.add_class::<Vectorizer>()?;
    m.add_class::<TextClassifier>()?;
    Ok(())
}
