//! Brute-force reference implementations and data generators shared by the
//! integration tests. Nothing here calls into the code under test.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

pub const LABELS: [&str; 3] = ["negative", "neutral", "positive"];

/// Lowercase, split on anything that is not an ASCII letter or digit.
/// Only valid for ASCII input, which is all the generators produce.
pub fn word_terms(text: &str, lo: usize, hi: usize) -> Vec<String> {
    let lower = text.to_ascii_lowercase();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in lower.chars() {
        if ch.is_ascii_alphanumeric() {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    let mut out = Vec::new();
    for n in lo..=hi {
        let mut start = 0;
        while start + n <= tokens.len() {
            out.push(tokens[start..start + n].join(" "));
            start += 1;
        }
    }
    out
}

pub fn char_terms(text: &str, lo: usize, hi: usize) -> Vec<String> {
    let lower = text.to_ascii_lowercase();
    let bytes = lower.as_bytes();
    let mut out = Vec::new();
    for n in lo..=hi {
        let mut start = 0;
        while start + n <= bytes.len() {
            out.push(String::from_utf8(bytes[start..start + n].to_vec()).unwrap());
            start += 1;
        }
    }
    out
}

fn dense_block(docs: &[String], query: &str, extract: &dyn Fn(&str) -> Vec<String>) -> Vec<f64> {
    let per_doc: Vec<Vec<String>> = docs.iter().map(|d| extract(d)).collect();
    let vocab: BTreeSet<String> = per_doc.iter().flatten().cloned().collect();
    let n = docs.len() as f64;
    let q = extract(query);
    vocab
        .iter()
        .map(|term| {
            let df = per_doc.iter().filter(|d| d.contains(term)).count() as f64;
            let idf = ((1.0 + n) / (1.0 + df)).ln() + 1.0;
            let tf = q.iter().filter(|t| *t == term).count() as f64;
            tf * idf
        })
        .collect()
}

/// Dense TF-IDF of `query` against a vectorizer fitted on `docs`: word block
/// then char block, each indexed by sorted term, L2-normalised together.
pub fn dense_tfidf(docs: &[String], query: &str, word: (usize, usize), chars: (usize, usize)) -> Vec<f64> {
    let mut v = dense_block(docs, query, &|t| word_terms(t, word.0, word.1));
    v.extend(dense_block(docs, query, &|t| char_terms(t, chars.0, chars.1)));
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in &mut v {
            *x /= norm;
        }
    }
    v
}

/// Laplace-smoothed multinomial NB parameters from a dense count matrix:
/// `(log_prior[c], log_likelihood[c][t])`.
pub fn mnb_oracle(rows: &[Vec<f64>], labels: &[usize], n_classes: usize, alpha: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = rows[0].len();
    let n = rows.len() as f64;
    let mut prior = Vec::new();
    let mut likelihood = Vec::new();
    for c in 0..n_classes {
        let members: Vec<&Vec<f64>> = rows.iter().zip(labels).filter(|(_, &y)| y == c).map(|(r, _)| r).collect();
        prior.push((members.len() as f64 / n).ln());
        let tf: Vec<f64> = (0..d).map(|t| members.iter().map(|r| r[t]).sum()).collect();
        let total: f64 = tf.iter().sum();
        likelihood.push(tf.iter().map(|x| ((x + alpha) / (total + alpha * d as f64)).ln()).collect());
    }
    (prior, likelihood)
}

/// Per-class F1 and macro-F1 by direct counting; 0/0 counts as 0.
pub fn metric_oracle(gold: &[usize], pred: &[usize]) -> ([f64; 3], f64) {
    let mut f1 = [0.0; 3];
    for c in 0..3 {
        let mut tp = 0.0;
        let mut fp = 0.0;
        let mut fn_ = 0.0;
        for (g, p) in gold.iter().zip(pred) {
            match (*g == c, *p == c) {
                (true, true) => tp += 1.0,
                (false, true) => fp += 1.0,
                (true, false) => fn_ += 1.0,
                _ => {}
            }
        }
        let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
        f1[c] = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    }
    (f1, (f1[0] + f1[1] + f1[2]) / 3.0)
}

const SYLLABLES: [&str; 12] = ["la", "ko", "mi", "tu", "re", "sa", "no", "pi", "xe", "da", "vu", "go"];

/// A random ASCII corpus of at most `max_docs` documents drawn from at most
/// `max_terms` distinct words, with some punctuation mixed in.
pub fn random_corpus<R: Rng>(rng: &mut R, max_docs: usize, max_terms: usize) -> Vec<String> {
    let n_terms = rng.gen_range(1..=max_terms);
    let words: Vec<String> = (0..n_terms)
        .map(|i| {
            let len = rng.gen_range(1..=3);
            let mut w: String = (0..len).map(|_| *SYLLABLES.choose(rng).unwrap()).collect();
            if rng.gen_bool(0.2) {
                w = w.to_uppercase();
            }
            if rng.gen_bool(0.1) {
                w.push_str(&i.to_string());
            }
            w
        })
        .collect();
    let n_docs = rng.gen_range(1..=max_docs);
    (0..n_docs)
        .map(|_| {
            let len = rng.gen_range(0..=8);
            let mut doc = String::new();
            for i in 0..len {
                if i > 0 {
                    doc.push_str([" ", " ", "  ", ", ", "-"].choose(rng).unwrap());
                }
                doc.push_str(words.choose(rng).unwrap());
            }
            doc
        })
        .collect()
}

const CLASS_WORDS: [[&str; 8]; 3] = [
    ["odio", "terrible", "awful", "triste", "hate", "horrible", "malo", "worst"],
    ["martes", "meeting", "reporte", "schedule", "oficina", "update", "horario", "agenda"],
    ["amor", "awesome", "feliz", "love", "genial", "great", "bonito", "happy"],
];
const FILLER: [&str; 12] = ["el", "the", "de", "and", "que", "is", "la", "my", "en", "so", "pero", "today"];
const EXTRAS: [&str; 5] = ["@amigo", "#MondayVibes", "www.example.com", "sooooo", "<3"];

/// Labelled tweet blocks with class-specific vocabulary. Labels cycle so
/// every class is equally represented; tokens are shuffled.
pub fn synthetic_blocks<R: Rng>(rng: &mut R, n: usize, id_prefix: &str) -> String {
    let mut out = String::new();
    for i in 0..n {
        let class = i % 3;
        let mut tokens: Vec<(&str, &str)> = Vec::new();
        for _ in 0..3 {
            let w = CLASS_WORDS[class].choose(rng).unwrap();
            tokens.push((w, if w.is_ascii() && w.ends_with('o') { "lang2" } else { "lang1" }));
        }
        for _ in 0..rng.gen_range(2..=5) {
            tokens.push((FILLER.choose(rng).unwrap(), "lang2"));
        }
        if rng.gen_bool(0.3) {
            tokens.push((EXTRAS.choose(rng).unwrap(), "other"));
        }
        tokens.shuffle(rng);
        let _ = writeln!(out, "meta {id_prefix}{i} {}", LABELS[class]);
        for (t, tag) in tokens {
            let _ = writeln!(out, "{t}\t{tag}");
        }
        out.push('\n');
    }
    out
}
