//! Per-class precision/recall/F1, macro-averaged F1 and result tables.
//!
//! Any ratio whose denominator is zero is reported as 0.

use std::fmt::{self, Write as _};

use crate::corpus::Sentiment;
use crate::error::{Error, Result};

/// Rows are gold classes, columns predicted classes, both in
/// [`Sentiment::ALL`] order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn from_pairs(gold: &[Sentiment], pred: &[Sentiment]) -> ConfusionMatrix {
        let mut counts = [[0u64; 3]; 3];
        for (g, p) in gold.iter().zip(pred) {
            counts[g.index()][p.index()] += 1;
        }
        ConfusionMatrix { counts }
    }

    pub fn get(&self, gold: Sentiment, pred: Sentiment) -> u64 {
        self.counts[gold.index()][pred.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    pub fn true_positives(&self, class: Sentiment) -> u64 {
        self.counts[class.index()][class.index()]
    }

    pub fn false_positives(&self, class: Sentiment) -> u64 {
        let c = class.index();
        (0..3).filter(|&g| g != c).map(|g| self.counts[g][c]).sum()
    }

    pub fn false_negatives(&self, class: Sentiment) -> u64 {
        let c = class.index();
        (0..3).filter(|&p| p != c).map(|p| self.counts[c][p]).sum()
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>10}", "gold\\pred")?;
        for s in Sentiment::ALL {
            write!(f, " {:>9}", s.as_str())?;
        }
        for g in Sentiment::ALL {
            writeln!(f)?;
            write!(f, "{:>10}", g.as_str())?;
            for p in Sentiment::ALL {
                write!(f, " {:>9}", self.get(g, p))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    per_class: [ClassMetrics; 3],
    pub macro_f1: f64,
    pub accuracy: f64,
}

impl EvalReport {
    pub fn class(&self, s: Sentiment) -> ClassMetrics {
        self.per_class[s.index()]
    }

    /// `metric.{name}={value}` lines, six decimal places.
    pub fn machine_readable(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "metric.n={}", self.confusion.total());
        let _ = writeln!(out, "metric.macro_f1={:.6}", self.macro_f1);
        let _ = writeln!(out, "metric.accuracy={:.6}", self.accuracy);
        for s in Sentiment::ALL {
            let m = self.class(s);
            let _ = writeln!(out, "metric.{s}.precision={:.6}", m.precision);
            let _ = writeln!(out, "metric.{s}.recall={:.6}", m.recall);
            let _ = writeln!(out, "metric.{s}.f1={:.6}", m.f1);
        }
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>9} {:>9} {:>9}", "class", "precision", "recall", "f1")?;
        for s in Sentiment::ALL {
            let m = self.class(s);
            writeln!(f, "{:<10} {:>9.4} {:>9.4} {:>9.4}", s.as_str(), m.precision, m.recall, m.f1)?;
        }
        writeln!(f, "macro F1   {:.4}", self.macro_f1)?;
        writeln!(f, "accuracy   {:.4}", self.accuracy)?;
        write!(f, "{}", self.confusion)
    }
}

/// Scores predictions against gold labels.
pub fn score(gold: &[Sentiment], pred: &[Sentiment]) -> Result<EvalReport> {
    if gold.len() != pred.len() {
        return Err(Error::Data(format!("{} gold labels but {} predictions", gold.len(), pred.len())));
    }
    if gold.is_empty() {
        return Err(Error::Data("cannot score an empty label set".to_string()));
    }
    let confusion = ConfusionMatrix::from_pairs(gold, pred);
    let per_class = Sentiment::ALL.map(|s| {
        let tp = confusion.true_positives(s) as f64;
        let precision = ratio(tp, tp + confusion.false_positives(s) as f64);
        let recall = ratio(tp, tp + confusion.false_negatives(s) as f64);
        let f1 = ratio(2.0 * precision * recall, precision + recall);
        ClassMetrics { precision, recall, f1 }
    });
    let macro_f1 = per_class.iter().map(|m| m.f1).sum::<f64>() / per_class.len() as f64;
    let accuracy = confusion.trace() as f64 / confusion.total() as f64;
    Ok(EvalReport {
        confusion,
        per_class,
        macro_f1,
        accuracy,
    })
}

/// One line of a system comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub system: String,
    pub doc_mode: String,
    pub macro_f1: f64,
}

impl GridRow {
    pub fn new(system: impl Into<String>, doc_mode: impl Into<String>, macro_f1: f64) -> GridRow {
        GridRow {
            system: system.into(),
            doc_mode: doc_mode.into(),
            macro_f1,
        }
    }
}

const GRID_HEADER: [&str; 3] = ["System", "TF-IDF Input", "Dev Avg F1-Score"];

fn percent(f1: f64) -> String {
    format!("{:.2}%", f1 * 100.0)
}

/// Aligned plain-text table with one row per system/input combination.
pub fn comparison_grid(rows: &[GridRow]) -> String {
    let cells: Vec<[String; 3]> = rows
        .iter()
        .map(|r| [r.system.clone(), r.doc_mode.clone(), percent(r.macro_f1)])
        .collect();
    let mut widths = GRID_HEADER.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: [&str; 3]| {
        let _ = writeln!(out, "{:<w0$}  {:<w1$}  {:>w2$}", row[0], row[1], row[2], w0 = widths[0], w1 = widths[1], w2 = widths[2]);
    };
    line(&mut out, GRID_HEADER);
    let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 4));
    for row in &cells {
        line(&mut out, [&row[0], &row[1], &row[2]]);
    }
    out
}

/// The same table as comma-separated values.
pub fn comparison_grid_csv(rows: &[GridRow]) -> String {
    let mut out = GRID_HEADER.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.system, r.doc_mode, percent(r.macro_f1));
    }
    out
}
