//! Tweet text normalisation.
//!
//! Each rule is a pure `&str -> String` function whose output is
//! single-space separated with no leading or trailing whitespace.
//! [`run_pipeline`] applies the enabled rules in a fixed order:
//!
//! 1. [`replace_emoji`]
//! 2. [`remove_mentions`]
//! 3. [`replace_urls`]
//! 4. [`collapse_elongation`]
//! 5. [`segment_hashtags`]
//! 6. [`remove_non_ascii`]
//!
//! Non-ASCII removal runs last so that emoji are textualised before they
//! could be deleted.

mod lexicon;

use std::sync::OnceLock;

use regex::Regex;

pub use lexicon::EmojiLexicon;

/// Upper bound on repeated passes in [`run_pipeline`].
const MAX_PASSES: usize = 8;

/// Top-level domains accepted for bare `domain.tld` URLs.
pub const URL_TLDS: [&str; 10] = ["com", "org", "net", "edu", "gov", "io", "co", "es", "mx", "ly"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    pub replace_emoji: bool,
    pub remove_mentions: bool,
    pub remove_non_ascii: bool,
    pub replace_urls: bool,
    pub collapse_elongation: bool,
    pub segment_hashtags: bool,
    pub elongation_min_run: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            replace_emoji: true,
            remove_mentions: true,
            remove_non_ascii: true,
            replace_urls: true,
            collapse_elongation: true,
            segment_hashtags: true,
            elongation_min_run: 3,
        }
    }
}

impl PipelineConfig {
    /// Every rule disabled; the pipeline only normalises whitespace.
    pub fn identity() -> Self {
        PipelineConfig {
            replace_emoji: false,
            remove_mentions: false,
            remove_non_ascii: false,
            replace_urls: false,
            collapse_elongation: false,
            segment_hashtags: false,
            elongation_min_run: 3,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.elongation_min_run < 2 {
            return Err(format!("elongation_min_run must be >= 2, got {}", self.elongation_min_run));
        }
        Ok(())
    }
}

/// Collapses whitespace runs to a single space and trims both ends.
pub fn normalize_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

fn map_tokens(text: &str, mut f: impl FnMut(&str) -> Option<String>) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        let Some(mapped) = f(word) else { continue };
        for piece in mapped.split_whitespace() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(piece);
        }
    }
    out
}

pub fn replace_emoji(text: &str, lexicon: &EmojiLexicon) -> String {
    normalize_whitespace(&lexicon.replace_all(text))
}

/// Drops every whitespace-delimited token that begins with `@`.
pub fn remove_mentions(text: &str) -> String {
    map_tokens(text, |w| (!w.starts_with('@')).then(|| w.to_string()))
}

/// Deletes every codepoint above U+007F.
pub fn remove_non_ascii(text: &str) -> String {
    let ascii: String = text.chars().filter(char::is_ascii).collect();
    normalize_whitespace(&ascii)
}

fn url_patterns() -> &'static [Regex; 3] {
    static PATTERNS: OnceLock<[Regex; 3]> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        let tlds = URL_TLDS.join("|");
        [
            Regex::new(r"^[A-Za-z][A-Za-z0-9+.\-]*://\S+$").unwrap(),
            Regex::new(r"^(?i:www)\.\S+$").unwrap(),
            Regex::new(&format!(r"^[A-Za-z0-9\-]+(?:\.[A-Za-z0-9\-]+)*\.(?i:{tlds})(?:[/?]\S*)?$")).unwrap(),
        ]
    })
}

/// True if the whitespace-free token is URL-shaped: `scheme://rest`,
/// `www.rest`, or `label(.label)*.tld` optionally followed by `/...` or
/// `?...`, with the TLD taken from [`URL_TLDS`].
pub fn is_url(token: &str) -> bool {
    url_patterns().iter().any(|re| re.is_match(token))
}

/// Replaces each URL-shaped token with the literal token `URL`.
pub fn replace_urls(text: &str) -> String {
    map_tokens(text, |w| Some(if is_url(w) { "URL".to_string() } else { w.to_string() }))
}

fn same_letter(a: char, b: char) -> bool {
    a == b || a.to_lowercase().eq(b.to_lowercase())
}

/// Reduces every run of at least `min_run` identical letters (compared
/// case-insensitively) to its first character. Digits and punctuation are
/// never collapsed.
pub fn collapse_elongation(text: &str, min_run: usize) -> String {
    let min_run = min_run.max(2);
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i + 1;
        if c.is_alphabetic() {
            while j < chars.len() && same_letter(c, chars[j]) {
                j += 1;
            }
        }
        if j - i >= min_run {
            out.push(c);
        } else {
            out.extend(&chars[i..j]);
        }
        i = j;
    }
    normalize_whitespace(&out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Lower,
    Upper,
    Digit,
    Other,
}

fn classify(c: char) -> CharClass {
    if c.is_ascii_digit() {
        CharClass::Digit
    } else if c.is_uppercase() {
        CharClass::Upper
    } else if c.is_alphabetic() {
        CharClass::Lower
    } else {
        CharClass::Other
    }
}

fn split_hashtag(body: &str) -> Vec<String> {
    let mut pieces = Vec::new();
    let mut current = String::new();
    let mut prev: Option<CharClass> = None;
    for c in body.chars() {
        if c == '_' || c == '#' {
            if !current.is_empty() {
                pieces.push(std::mem::take(&mut current));
            }
            prev = None;
            continue;
        }
        let class = classify(c);
        let boundary = match (prev, class) {
            (Some(CharClass::Lower), CharClass::Upper) => true,
            (Some(CharClass::Lower | CharClass::Upper), CharClass::Digit) => true,
            (Some(CharClass::Digit), CharClass::Lower | CharClass::Upper) => true,
            _ => false,
        };
        if boundary && !current.is_empty() {
            pieces.push(std::mem::take(&mut current));
        }
        current.push(c);
        prev = Some(class);
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces
}

/// Strips `#` from hashtag tokens and splits them at lower-to-upper case
/// changes, letter/digit changes and underscores.
pub fn segment_hashtags(text: &str) -> String {
    map_tokens(text, |w| {
        if w.starts_with('#') {
            Some(split_hashtag(w).join(" "))
        } else {
            Some(w.to_string())
        }
    })
}

fn single_pass(text: &str, cfg: &PipelineConfig, lexicon: &EmojiLexicon) -> String {
    let mut text = normalize_whitespace(text);
    if cfg.replace_emoji {
        text = replace_emoji(&text, lexicon);
    }
    if cfg.remove_mentions {
        text = remove_mentions(&text);
    }
    if cfg.replace_urls {
        text = replace_urls(&text);
    }
    if cfg.collapse_elongation {
        text = collapse_elongation(&text, cfg.elongation_min_run);
    }
    if cfg.segment_hashtags {
        text = segment_hashtags(&text);
    }
    if cfg.remove_non_ascii {
        text = remove_non_ascii(&text);
    }
    text
}

/// Applies the enabled rules in order.
///
/// Deleting characters (non-ASCII codepoints, mentions, letters of an
/// elongation) can expose new matches for earlier rules, e.g. `<é3` becomes
/// `<3`. The rule sequence is therefore repeated until the text stops
/// changing, so the result is a fixed point of the pipeline.
pub fn run_pipeline(text: &str, cfg: &PipelineConfig, lexicon: &EmojiLexicon) -> String {
    let mut current = single_pass(text, cfg, lexicon);
    for _ in 1..MAX_PASSES {
        let next = single_pass(&current, cfg, lexicon);
        if next == current {
            break;
        }
        current = next;
    }
    current
}
