//! Word- and character-level TF-IDF features.
//!
//! Weights use raw term counts and smoothed inverse document frequency,
//!
//! ```text
//! w(t) = count(t) * (ln((1 + N) / (1 + df(t))) + 1)
//! ```
//!
//! The word block occupies indices `[0, |word vocab|)`, the character block
//! follows it, and the concatenated vector is L2-normalised.

mod analyzer;
mod sparse;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

pub use analyzer::{Analyzer, MAX_NGRAM};
pub use sparse::{SparseError, SparseVector};

use crate::corpus::{Dataset, Sentiment};
use crate::error::{Error, Result};

/// How training tweets are turned into documents before fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocMode {
    /// One document per class (Negative, Neutral, Positive), each the
    /// space-join of that class's tweets.
    PerClassConcatenated,
    /// One document per tweet.
    AllDocuments,
}

impl DocMode {
    pub const ALL: [DocMode; 2] = [DocMode::PerClassConcatenated, DocMode::AllDocuments];

    /// Short identifier used in files and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            DocMode::PerClassConcatenated => "concatenated",
            DocMode::AllDocuments => "all",
        }
    }

    /// Label used in result tables.
    pub fn label(self) -> &'static str {
        match self {
            DocMode::PerClassConcatenated => "concatenated docs per class",
            DocMode::AllDocuments => "all documents",
        }
    }
}

impl fmt::Display for DocMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "concatenated" | "per_class" | "per-class" => Ok(DocMode::PerClassConcatenated),
            "all" | "all_documents" | "all-documents" => Ok(DocMode::AllDocuments),
            _ => Err(format!("unknown document mode {s:?} (expected concatenated or all)")),
        }
    }
}

/// Builds the fitting documents for `dataset`. `texts[i]` is the
/// preprocessed text of the i-th tweet.
pub fn prepare_documents(dataset: &Dataset, mode: DocMode, texts: &[String]) -> Result<Vec<String>> {
    if texts.len() != dataset.len() {
        return Err(Error::Data(format!(
            "{} preprocessed texts for {} tweets",
            texts.len(),
            dataset.len()
        )));
    }
    match mode {
        DocMode::AllDocuments => Ok(texts.to_vec()),
        DocMode::PerClassConcatenated => {
            let mut docs = vec![String::new(); Sentiment::ALL.len()];
            for (tweet, text) in dataset.iter().zip(texts) {
                let s = tweet.sentiment.ok_or_else(|| Error::Unlabeled { id: tweet.id.clone() })?;
                let doc = &mut docs[s.index()];
                if !doc.is_empty() {
                    doc.push(' ');
                }
                doc.push_str(text);
            }
            Ok(docs)
        }
    }
}

/// Term index and document frequencies for one analyzer.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    document_frequency: Vec<u64>,
    n_documents: u64,
    idf: Vec<f64>,
}

fn smoothed_idf(n_documents: u64, df: u64) -> f64 {
    ((1.0 + n_documents as f64) / (1.0 + df as f64)).ln() + 1.0
}

impl Vocabulary {
    /// Counts each term at most once per document. Terms are indexed in
    /// lexicographic order.
    pub fn fit<S: AsRef<str>>(docs: &[S], analyzer: &Analyzer) -> Result<Vocabulary> {
        if docs.is_empty() {
            return Err(Error::Data("cannot fit a vocabulary on zero documents".to_string()));
        }
        let mut df: BTreeMap<String, u64> = BTreeMap::new();
        for doc in docs {
            let unique: HashSet<String> = analyzer.terms(doc.as_ref()).into_iter().collect();
            for term in unique {
                *df.entry(term).or_insert(0) += 1;
            }
        }
        let (terms, counts): (Vec<_>, Vec<_>) = df.into_iter().unzip();
        Self::from_parts(terms, counts, docs.len() as u64)
    }

    /// `terms[i]` gets index `i`.
    pub fn from_parts(terms: Vec<String>, document_frequency: Vec<u64>, n_documents: u64) -> Result<Vocabulary> {
        if n_documents == 0 {
            return Err(Error::Data("vocabulary needs at least one document".to_string()));
        }
        if terms.len() != document_frequency.len() {
            return Err(Error::Data("term and frequency lists differ in length".to_string()));
        }
        if let Some((t, &df)) = terms
            .iter()
            .zip(&document_frequency)
            .find(|(_, &df)| df == 0 || df > n_documents)
        {
            return Err(Error::Data(format!(
                "document frequency {df} of {t:?} outside [1, {n_documents}]"
            )));
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::Data(format!("duplicate vocabulary term {t:?}")));
            }
        }
        let idf = document_frequency.iter().map(|&df| smoothed_idf(n_documents, df)).collect();
        Ok(Vocabulary {
            terms,
            index,
            document_frequency,
            n_documents,
            idf,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_documents(&self) -> u64 {
        self.n_documents
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn document_frequency(&self, term: &str) -> Option<u64> {
        self.index_of(term).map(|i| self.document_frequency[i])
    }

    pub fn idf(&self, index: usize) -> f64 {
        self.idf[index]
    }

    /// Adds `count * idf` weights for `terms` into `out`, shifted by `offset`.
    fn accumulate(&self, terms: Vec<String>, offset: usize, out: &mut HashMap<usize, f64>) {
        let mut counts: HashMap<usize, u64> = HashMap::new();
        for term in terms {
            if let Some(&i) = self.index.get(&term) {
                *counts.entry(i).or_insert(0) += 1;
            }
        }
        for (i, count) in counts {
            out.insert(offset + i, count as f64 * self.idf[i]);
        }
    }
}

/// Fitted word + character TF-IDF vectorizer.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfModel {
    mode: DocMode,
    word_analyzer: Analyzer,
    char_analyzer: Analyzer,
    word_vocab: Vocabulary,
    char_vocab: Vocabulary,
}

impl TfIdfModel {
    /// Fits both vocabularies on the same documents.
    pub fn fit<S: AsRef<str>>(docs: &[S], word_analyzer: Analyzer, char_analyzer: Analyzer, mode: DocMode) -> Result<TfIdfModel> {
        if !word_analyzer.is_word() || char_analyzer.is_word() {
            return Err(Error::Config("expected a word analyzer and a char analyzer".to_string()));
        }
        let word_vocab = Vocabulary::fit(docs, &word_analyzer)?;
        let char_vocab = Vocabulary::fit(docs, &char_analyzer)?;
        Ok(TfIdfModel {
            mode,
            word_analyzer,
            char_analyzer,
            word_vocab,
            char_vocab,
        })
    }

    pub fn mode(&self) -> DocMode {
        self.mode
    }

    pub fn word_analyzer(&self) -> Analyzer {
        self.word_analyzer
    }

    pub fn char_analyzer(&self) -> Analyzer {
        self.char_analyzer
    }

    pub fn word_vocab(&self) -> &Vocabulary {
        &self.word_vocab
    }

    pub fn char_vocab(&self) -> &Vocabulary {
        &self.char_vocab
    }

    pub fn dimension(&self) -> usize {
        self.word_vocab.len() + self.char_vocab.len()
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        let mut weights = HashMap::new();
        self.word_vocab.accumulate(self.word_analyzer.terms(text), 0, &mut weights);
        self.char_vocab
            .accumulate(self.char_analyzer.terms(text), self.word_vocab.len(), &mut weights);
        let mut entries: Vec<(usize, f64)> = weights.into_iter().collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        let mut v = SparseVector::new(self.dimension(), entries).expect("indices within fitted dimension");
        v.normalize();
        v
    }

    pub fn transform_batch<S: AsRef<str>>(&self, texts: &[S]) -> Vec<SparseVector> {
        texts.iter().map(|t| self.transform(t.as_ref())).collect()
    }

    /// Text serialisation: a header line followed by one
    /// `{w|c}<TAB>term<TAB>index<TAB>df` line per term.
    pub fn to_text(&self) -> String {
        let (wl, wh) = self.word_analyzer.range();
        let (cl, ch) = self.char_analyzer.range();
        let mut out = format!(
            "tfidf v1 {} {wl}-{wh} {cl}-{ch} {} {}\n",
            self.mode,
            self.word_vocab.n_documents,
            self.char_vocab.n_documents
        );
        for (block, vocab) in [("w", &self.word_vocab), ("c", &self.char_vocab)] {
            for (i, term) in vocab.terms.iter().enumerate() {
                let _ = writeln!(out, "{block}\t{}\t{i}\t{}", escape_term(term), vocab.document_frequency[i]);
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<TfIdfModel> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty vectorizer file".to_string(),
        })?;
        let header_err = |message: String| Error::Parse { line: 1, message };
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 7 || fields[0] != "tfidf" {
            return Err(header_err(format!("bad vectorizer header {header:?}")));
        }
        if fields[1] != "v1" {
            return Err(header_err(format!("unsupported vectorizer version {:?}", fields[1])));
        }
        let mode: DocMode = fields[2].parse().map_err(header_err)?;
        let word_analyzer: Analyzer = format!("word:{}", fields[3]).parse().map_err(header_err)?;
        let char_analyzer: Analyzer = format!("char:{}", fields[4]).parse().map_err(header_err)?;
        let n_word: u64 = fields[5].parse().map_err(|_| header_err(format!("bad document count {:?}", fields[5])))?;
        let n_char: u64 = fields[6].parse().map_err(|_| header_err(format!("bad document count {:?}", fields[6])))?;

        let mut blocks: [Vec<(usize, String, u64)>; 2] = [Vec::new(), Vec::new()];
        for (idx, line) in lines {
            let lineno = idx + 1;
            let err = |message: String| Error::Parse { line: lineno, message };
            let parts: Vec<&str> = line.split('\t').collect();
            if parts.len() != 4 {
                return Err(err(format!("expected 4 tab-separated fields, found {}", parts.len())));
            }
            let block = match parts[0] {
                "w" => 0,
                "c" => 1,
                other => return Err(err(format!("unknown block {other:?}"))),
            };
            let term = unescape_term(parts[1]).map_err(err)?;
            let index: usize = parts[2].parse().map_err(|_| err(format!("bad index {:?}", parts[2])))?;
            let df: u64 = parts[3].parse().map_err(|_| err(format!("bad document frequency {:?}", parts[3])))?;
            blocks[block].push((index, term, df));
        }
        let [word_rows, char_rows] = blocks;
        let build = |mut rows: Vec<(usize, String, u64)>, n: u64| -> Result<Vocabulary> {
            rows.sort_by_key(|r| r.0);
            if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
                return Err(Error::Data("vocabulary indices are not a permutation of 0..n".to_string()));
            }
            let (terms, dfs) = rows.into_iter().map(|(_, t, df)| (t, df)).unzip();
            Vocabulary::from_parts(terms, dfs, n)
        };
        Ok(TfIdfModel {
            mode,
            word_analyzer,
            char_analyzer,
            word_vocab: build(word_rows, n_word)?,
            char_vocab: build(char_rows, n_char)?,
        })
    }
}

fn escape_term(term: &str) -> String {
    let mut out = String::with_capacity(term.len());
    for c in term.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape_term(raw: &str) -> Result<String, String> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape sequence \\{}", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{LangTag, Token, Tweet};

    fn labeled(specs: &[(&str, Sentiment)]) -> (Dataset, Vec<String>) {
        let tweets = specs
            .iter()
            .enumerate()
            .map(|(i, (text, s))| {
                let tokens = text.split(' ').map(|w| Token::new(w, LangTag::Lang1).unwrap()).collect();
                Tweet::new(i.to_string(), tokens, Some(*s)).unwrap()
            })
            .collect();
        let texts = specs.iter().map(|(t, _)| t.to_string()).collect();
        (Dataset::new("d", tweets).unwrap(), texts)
    }

    #[test]
    fn prepare_all_documents() {
        use Sentiment::*;
        let (d, texts) = labeled(&[("a", Positive), ("b", Positive), ("c", Neutral), ("d", Neutral), ("e", Negative)]);
        assert_eq!(prepare_documents(&d, DocMode::AllDocuments, &texts).unwrap().len(), 5);
        let docs = prepare_documents(&d, DocMode::PerClassConcatenated, &texts).unwrap();
        assert_eq!(docs, ["e", "c d", "a b"]);
        assert!(prepare_documents(&Dataset::empty("e"), DocMode::AllDocuments, &[]).unwrap().is_empty());
        assert_eq!(prepare_documents(&Dataset::empty("e"), DocMode::PerClassConcatenated, &[]).unwrap().len(), 3);
    }

    #[test]
    fn prepare_concatenated_needs_labels() {
        let tweet = Tweet::new("u1", vec![Token::new("x", LangTag::Lang1).unwrap()], None).unwrap();
        let d = Dataset::new("d", vec![tweet]).unwrap();
        let err = prepare_documents(&d, DocMode::PerClassConcatenated, &["x".to_string()]).unwrap_err();
        assert!(matches!(err, Error::Unlabeled { id } if id == "u1"));
    }

    #[test]
    fn word_vocab_by_hand() {
        let v = Vocabulary::fit(&["a b", "b c"], &Analyzer::word(1, 1).unwrap()).unwrap();
        assert_eq!(v.terms(), ["a", "b", "c"]);
        assert_eq!(v.document_frequency("a"), Some(1));
        assert_eq!(v.document_frequency("b"), Some(2));
        assert_eq!(v.document_frequency("c"), Some(1));
        assert_eq!(v.n_documents(), 2);
    }

    #[test]
    fn char_vocab_by_hand() {
        let v = Vocabulary::fit(&["ab"], &Analyzer::char(2, 2).unwrap()).unwrap();
        assert_eq!(v.terms(), ["ab"]);
        assert_eq!(v.document_frequency("ab"), Some(1));
    }

    #[test]
    fn fit_rejects_empty() {
        let docs: [&str; 0] = [];
        assert!(Vocabulary::fit(&docs, &Analyzer::word(1, 1).unwrap()).is_err());
    }

    #[test]
    fn single_doc_weight_is_one() {
        let m = TfIdfModel::fit(&["a"], Analyzer::word(1, 1).unwrap(), Analyzer::char(2, 2).unwrap(), DocMode::AllDocuments).unwrap();
        assert_eq!(m.dimension(), 1);
        let v = m.transform("a");
        assert_eq!(v.entries(), &[(0, 1.0)]);
        assert!(m.transform("zzz").is_zero());
        assert_eq!(m.transform("zzz").dimension(), 1);
    }

    #[test]
    fn blocks_are_disjoint() {
        let m = TfIdfModel::fit(&["hola amigo", "hi friend"], Analyzer::word(1, 1).unwrap(), Analyzer::char(2, 3).unwrap(), DocMode::AllDocuments).unwrap();
        let v = m.transform("hola friend");
        let words = m.word_vocab().len();
        assert!(v.iter().any(|(i, _)| i < words));
        assert!(v.iter().any(|(i, _)| i >= words));
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn persistence_roundtrip_with_escapes() {
        let docs = ["tab\there", "new\nline", "back\\slash"];
        let m = TfIdfModel::fit(&docs, Analyzer::word(1, 2).unwrap(), Analyzer::char(1, 2).unwrap(), DocMode::PerClassConcatenated).unwrap();
        let text = m.to_text();
        assert!(text.starts_with("tfidf v1 concatenated 1-2 1-2 3 3\n"));
        assert_eq!(TfIdfModel::from_text(&text).unwrap(), m);
    }

    #[test]
    fn from_text_rejects_bad_input() {
        assert!(TfIdfModel::from_text("").is_err());
        assert!(TfIdfModel::from_text("tfidf v2 all 1-1 2-5 1 1\n").is_err());
        assert!(TfIdfModel::from_text("tfidf v1 all 1-1 2-5 1 1\nw\ta\t1\t1\n").is_err());
        assert!(TfIdfModel::from_text("tfidf v1 all 1-1 2-5 1 1\nw\ta\t0\t2\n").is_err());
        assert!(TfIdfModel::from_text("tfidf v1 all 1-1 2-5 1 1\nw\ta\\q\t0\t1\n").is_err());
    }
}
