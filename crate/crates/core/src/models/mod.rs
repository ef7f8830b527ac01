//! Three-class sentiment classifiers over TF-IDF vectors.
//!
//! Class order is always Negative, Neutral, Positive: score vectors,
//! weight rows and persisted lines follow [`Sentiment::ALL`]. Ties in
//! [`Classifier::predict`] go to the lowest class index.

mod linear;
pub mod logistic;
mod naive_bayes;
pub mod svm;

use std::fmt::{self, Write as _};
use std::str::FromStr;

pub use linear::LinearModel;
pub use naive_bayes::MnbModel;

use crate::corpus::Sentiment;
use crate::error::{Error, Result};
use crate::vectorize::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Lr,
    Mnb,
    Svm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Lr, ModelKind::Mnb, ModelKind::Svm];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Lr => "lr",
            ModelKind::Mnb => "mnb",
            ModelKind::Svm => "svm",
        }
    }

    /// Upper-case name for result tables.
    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::Lr => "LR",
            ModelKind::Mnb => "MNB",
            ModelKind::Svm => "SVM",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lr" | "logistic" => Ok(ModelKind::Lr),
            "mnb" | "nb" => Ok(ModelKind::Mnb),
            "svm" => Ok(ModelKind::Svm),
            _ => Err(format!("unknown model kind {s:?} (expected lr, mnb or svm)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub kind: ModelKind,
    pub l2_lambda: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub mnb_alpha: f64,
    pub seed: u64,
}

impl TrainConfig {
    /// Defaults: LR lambda 1e-4, lr 0.1; SVM lambda 1e-4, lr 0.05; both 50
    /// epochs with batches of 32. MNB alpha 1.0.
    pub fn new(kind: ModelKind) -> TrainConfig {
        TrainConfig {
            kind,
            l2_lambda: 1e-4,
            learning_rate: if kind == ModelKind::Svm { 0.05 } else { 0.1 },
            epochs: 50,
            batch_size: 32,
            mnb_alpha: 1.0,
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return bad(format!("l2_lambda must be >= 0, got {}", self.l2_lambda));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be > 0, got {}", self.learning_rate));
        }
        if self.learning_rate * self.l2_lambda >= 1.0 {
            return bad("learning_rate * l2_lambda must be < 1".to_string());
        }
        if self.epochs == 0 {
            return bad("epochs must be >= 1".to_string());
        }
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1".to_string());
        }
        if !(self.mnb_alpha > 0.0 && self.mnb_alpha.is_finite()) {
            return bad(format!("mnb_alpha must be > 0, got {}", self.mnb_alpha));
        }
        Ok(())
    }
}

/// Training objective after each epoch (empty for MNB).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FitReport {
    pub epoch_objective: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Linear(LinearModel),
    NaiveBayes(MnbModel),
}

fn check_training_set(x: &[SparseVector], y: &[Sentiment]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::Data(format!("{} vectors but {} labels", x.len(), y.len())));
    }
    if x.len() < Sentiment::ALL.len() {
        return Err(Error::Data(format!("need at least 3 training samples, got {}", x.len())));
    }
    for s in Sentiment::ALL {
        if !y.contains(&s) {
            return Err(Error::Data(format!("class {s} has no training samples")));
        }
    }
    let dimension = x[0].dimension();
    if let Some(v) = x.iter().find(|v| v.dimension() != dimension) {
        return Err(Error::DimensionMismatch {
            expected: dimension,
            found: v.dimension(),
        });
    }
    Ok(dimension)
}

/// Trains a classifier of kind `cfg.kind`.
pub fn fit(x: &[SparseVector], y: &[Sentiment], cfg: &TrainConfig) -> Result<Classifier> {
    fit_with_report(x, y, cfg).map(|(c, _)| c)
}

pub fn fit_with_report(x: &[SparseVector], y: &[Sentiment], cfg: &TrainConfig) -> Result<(Classifier, FitReport)> {
    cfg.validate()?;
    let dimension = check_training_set(x, y)?;
    let labels: Vec<usize> = y.iter().map(|s| s.index()).collect();
    let k = Sentiment::ALL.len();
    match cfg.kind {
        ModelKind::Mnb => {
            let model = MnbModel::fit(x, &labels, k, dimension, cfg.mnb_alpha)?;
            Ok((Classifier::NaiveBayes(model), FitReport::default()))
        }
        ModelKind::Lr => {
            let (model, epoch_objective) = logistic::train(x, &labels, k, dimension, cfg)?;
            Ok((Classifier::Linear(model), FitReport { epoch_objective }))
        }
        ModelKind::Svm => {
            let (model, epoch_objective) = svm::train(x, &labels, k, dimension, cfg)?;
            Ok((Classifier::Linear(model), FitReport { epoch_objective }))
        }
    }
}

/// Index of the largest score; the first one wins on ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

impl Classifier {
    pub fn kind(&self) -> ModelKind {
        match self {
            Classifier::Linear(m) => m.kind(),
            Classifier::NaiveBayes(_) => ModelKind::Mnb,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Classifier::Linear(m) => m.dimension(),
            Classifier::NaiveBayes(m) => m.dimension(),
        }
    }

    /// Logits (LR), margins (SVM) or log joint probabilities (MNB).
    pub fn predict_scores(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if x.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.dimension(),
            });
        }
        Ok(match self {
            Classifier::Linear(m) => m.scores(x),
            Classifier::NaiveBayes(m) => m.scores(x),
        })
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Sentiment> {
        let scores = self.predict_scores(x)?;
        Ok(Sentiment::from_index(argmax(&scores)).expect("three-class model"))
    }

    pub fn predict_batch(&self, xs: &[SparseVector]) -> Result<Vec<Sentiment>> {
        xs.iter().map(|x| self.predict(x)).collect()
    }

    /// `model v1 {kind} {dimension}` (MNB appends `alpha={alpha}`), then
    /// one line per class: weights followed by bias for LR/SVM, log prior
    /// followed by log likelihoods for MNB. Numbers use 17 significant
    /// digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("model v1 {} {}", self.kind(), self.dimension());
        let push_row = |out: &mut String, values: &mut dyn Iterator<Item = f64>| {
            let mut first = true;
            for v in values {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        };
        match self {
            Classifier::Linear(m) => {
                out.push('\n');
                for k in 0..m.n_classes() {
                    push_row(&mut out, &mut m.row(k).iter().copied().chain([m.bias()[k]]));
                }
            }
            Classifier::NaiveBayes(m) => {
                let _ = writeln!(out, " alpha={:.16e}", m.alpha());
                for c in 0..m.n_classes() {
                    push_row(&mut out, &mut [m.log_prior()[c]].into_iter().chain(m.log_likelihood_row(c).iter().copied()));
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Classifier> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty model file".to_string(),
        })?;
        let header_err = |message: String| Error::Parse { line: 1, message };
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() < 4 || fields[0] != "model" {
            return Err(header_err(format!("bad model header {header:?}")));
        }
        if fields[1] != "v1" {
            return Err(header_err(format!("unsupported model version {:?}", fields[1])));
        }
        let kind: ModelKind = fields[2].parse().map_err(header_err)?;
        let dimension: usize = fields[3].parse().map_err(|_| header_err(format!("bad dimension {:?}", fields[3])))?;
        let alpha = match (kind, fields.get(4)) {
            (ModelKind::Mnb, Some(f)) => f
                .strip_prefix("alpha=")
                .and_then(|a| a.parse::<f64>().ok())
                .ok_or_else(|| header_err(format!("bad alpha field {f:?}")))?,
            (ModelKind::Mnb, None) => return Err(header_err("mnb header lacks alpha".to_string())),
            (_, None) if fields.len() == 4 => 0.0,
            _ => return Err(header_err(format!("unexpected header fields in {header:?}"))),
        };

        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let row = line
                .split(' ')
                .filter(|f| !f.is_empty())
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| Error::Parse {
                    line: lineno,
                    message: format!("bad number: {e}"),
                })?;
            if row.len() != dimension + 1 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected {} values, found {}", dimension + 1, row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != Sentiment::ALL.len() {
            return Err(Error::Data(format!("expected 3 class rows, found {}", rows.len())));
        }
        let n_classes = rows.len();
        match kind {
            ModelKind::Mnb => {
                let log_prior = rows.iter().map(|r| r[0]).collect();
                let log_likelihood = rows.iter().flat_map(|r| r[1..].iter().copied()).collect();
                MnbModel::from_parts(log_prior, log_likelihood, dimension, alpha)
                    .map(Classifier::NaiveBayes)
                    .map_err(Error::Data)
            }
            ModelKind::Lr | ModelKind::Svm => {
                let bias = rows.iter().map(|r| r[dimension]).collect();
                let weights = rows.iter().flat_map(|r| r[..dimension].iter().copied()).collect();
                LinearModel::from_parts(kind, n_classes, dimension, weights, bias)
                    .map(Classifier::Linear)
                    .map_err(Error::Data)
            }
        }
    }
}
