use std::fmt;
use std::str::FromStr;

/// Largest n-gram order accepted by either analyzer.
pub const MAX_NGRAM: usize = 8;

/// How a document is cut into terms.
///
/// * `Word` lowercases and splits on every run of non-alphanumeric
///   characters; n-grams are the tokens joined by a single space.
/// * `Char` lowercases and slides a window over the raw characters,
///   spaces included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analyzer {
    Word { ngram_min: usize, ngram_max: usize },
    Char { ngram_min: usize, ngram_max: usize },
}

fn check_range(ngram_min: usize, ngram_max: usize) -> Result<(), String> {
    if ngram_min < 1 || ngram_min > ngram_max || ngram_max > MAX_NGRAM {
        return Err(format!(
            "n-gram range {ngram_min}-{ngram_max} must satisfy 1 <= min <= max <= {MAX_NGRAM}"
        ));
    }
    Ok(())
}

impl Analyzer {
    pub fn word(ngram_min: usize, ngram_max: usize) -> Result<Analyzer, String> {
        check_range(ngram_min, ngram_max)?;
        Ok(Analyzer::Word { ngram_min, ngram_max })
    }

    pub fn char(ngram_min: usize, ngram_max: usize) -> Result<Analyzer, String> {
        check_range(ngram_min, ngram_max)?;
        Ok(Analyzer::Char { ngram_min, ngram_max })
    }

    pub fn range(&self) -> (usize, usize) {
        match *self {
            Analyzer::Word { ngram_min, ngram_max } | Analyzer::Char { ngram_min, ngram_max } => {
                (ngram_min, ngram_max)
            }
        }
    }

    pub fn is_word(&self) -> bool {
        matches!(self, Analyzer::Word { .. })
    }

    /// Every n-gram occurrence in `text`, duplicates kept.
    pub fn terms(&self, text: &str) -> Vec<String> {
        let (lo, hi) = self.range();
        let lower = text.to_lowercase();
        let mut out = Vec::new();
        match self {
            Analyzer::Word { .. } => {
                let tokens: Vec<&str> = lower.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).collect();
                for n in lo..=hi {
                    for window in tokens.windows(n) {
                        out.push(window.join(" "));
                    }
                }
            }
            Analyzer::Char { .. } => {
                let chars: Vec<char> = lower.chars().collect();
                for n in lo..=hi {
                    for window in chars.windows(n) {
                        out.push(window.iter().collect());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Analyzer {
    /// `word:1-1`, `char:2-5`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.range();
        let kind = if self.is_word() { "word" } else { "char" };
        write!(f, "{kind}:{lo}-{hi}")
    }
}

impl FromStr for Analyzer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, range) = s.split_once(':').ok_or_else(|| format!("bad analyzer {s:?}"))?;
        let (lo, hi) = range.split_once('-').ok_or_else(|| format!("bad n-gram range in {s:?}"))?;
        let lo: usize = lo.parse().map_err(|_| format!("bad n-gram range in {s:?}"))?;
        let hi: usize = hi.parse().map_err(|_| format!("bad n-gram range in {s:?}"))?;
        match kind {
            "word" => Analyzer::word(lo, hi),
            "char" => Analyzer::char(lo, hi),
            _ => Err(format!("unknown analyzer kind {kind:?}")),
        }
    }
}
