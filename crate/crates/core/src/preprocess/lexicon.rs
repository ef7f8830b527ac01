use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/emoji_lexicon.tsv");

/// Mapping from emoji / emoticon strings to their textual names.
///
/// Matching is longest-first. Non-ASCII keys (emoji) match anywhere. ASCII
/// keys (emoticons) only match at the start of the text, after whitespace or
/// directly after a previous match, and a key ending in a letter or digit
/// must not be followed by one; this keeps `http://` and `XDaniel` intact
/// while `<3<3` still yields two hearts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmojiLexicon {
    entries: HashMap<String, String>,
    max_key_chars: usize,
}

impl EmojiLexicon {
    /// Lexicon shipped with the crate: CLDR short names for common emoji plus
    /// ASCII emoticons.
    pub fn bundled() -> EmojiLexicon {
        Self::parse(BUNDLED).expect("bundled lexicon is valid")
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED
    }

    pub fn empty() -> EmojiLexicon {
        EmojiLexicon {
            entries: HashMap::new(),
            max_key_chars: 0,
        }
    }

    /// Parses `key<TAB>name` lines; blank lines and lines starting with `#`
    /// are skipped. A key listed twice with different names is rejected.
    pub fn parse(source: &str) -> Result<EmojiLexicon> {
        let mut entries = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, name) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected key<TAB>name".to_string(),
            })?;
            entries.push((idx + 1, key.to_string(), name.to_string()));
        }
        let mut lex = EmojiLexicon::empty();
        for (line, key, name) in entries {
            lex.insert(key, name).map_err(|message| Error::Parse { line, message })?;
        }
        Ok(lex)
    }

    pub fn insert(&mut self, key: impl Into<String>, name: impl Into<String>) -> Result<(), String> {
        let key = key.into();
        let name = name.into().split_whitespace().collect::<Vec<_>>().join(" ");
        if key.is_empty() || key.contains(['\t', '\n']) {
            return Err(format!("invalid lexicon key {key:?}"));
        }
        if name.is_empty() {
            return Err(format!("empty name for lexicon key {key:?}"));
        }
        match self.entries.get(&key) {
            Some(existing) if *existing != name => {
                return Err(format!("key {key:?} maps to both {existing:?} and {name:?}"));
            }
            _ => {}
        }
        self.max_key_chars = self.max_key_chars.max(key.chars().count());
        self.entries.insert(key, name);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Serialises back to the file format, keys sorted.
    pub fn to_tsv(&self) -> String {
        let mut keys: Vec<_> = self.entries.keys().collect();
        keys.sort();
        let mut out = String::new();
        for key in keys {
            let _ = writeln!(out, "{key}\t{}", self.entries[key]);
        }
        out
    }

    /// Replaces every lexicon match with ` name `; the caller collapses
    /// whitespace.
    pub(crate) fn replace_all(&self, text: &str) -> String {
        if self.entries.is_empty() {
            return text.to_string();
        }
        let bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len())).collect();
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len() + 16);
        let mut i = 0;
        let mut last_match_end: Option<usize> = None;
        while i < chars.len() {
            let left_ok = i == 0 || chars[i - 1].is_whitespace() || last_match_end == Some(i);
            let longest = self.max_key_chars.min(chars.len() - i);
            let mut matched = None;
            for len in (1..=longest).rev() {
                let candidate = &text[bounds[i]..bounds[i + len]];
                let Some(name) = self.entries.get(candidate) else {
                    continue;
                };
                if candidate.is_ascii() {
                    let last = chars[i + len - 1];
                    let right_ok = !last.is_alphanumeric() || chars.get(i + len).is_none_or(|c| !c.is_alphanumeric());
                    if !left_ok || !right_ok {
                        continue;
                    }
                }
                matched = Some((len, name));
                break;
            }
            match matched {
                Some((len, name)) => {
                    out.push(' ');
                    out.push_str(name);
                    out.push(' ');
                    i += len;
                    last_match_end = Some(i);
                }
                None => {
                    out.push(chars[i]);
                    i += 1;
                }
            }
        }
        out
    }
}
