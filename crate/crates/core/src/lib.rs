//! Sentiment classification for code-mixed (Spanish-English) tweets.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] reads language-tagged tweet blocks and monolingual CSV data,
//! * [`preprocess`] normalises tweet text (emoji, mentions, URLs, elongation,
//!   hashtags, non-ASCII),
//! * [`vectorize`] fits word- and character-level TF-IDF vocabularies and
//!   produces concatenated sparse feature vectors,
//! * [`models`] trains logistic regression, multinomial naive Bayes and a
//!   linear SVM,
//! * [`eval`] scores predictions with per-class and macro-averaged F1.
//!
//! [`config`] and [`pipeline`] wire the stages together for the `codemix`
//! binary.

pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod models;
pub mod pipeline;
pub mod preprocess;
pub mod vectorize;

pub use corpus::{ClassDistribution, Dataset, LangTag, Sentiment, Token, Tweet};
pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, EvalReport};
pub use models::{Classifier, ModelKind, TrainConfig};
pub use preprocess::{EmojiLexicon, PipelineConfig};
pub use vectorize::{Analyzer, DocMode, SparseVector, TfIdfModel, Vocabulary};
