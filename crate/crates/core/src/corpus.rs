//! Language-tagged tweet corpora.
//!
//! Code-mixed data is stored as blocks of one token per line:
//!
//! ```text
//! meta 1 positive
//! ha	lang2
//! u	lang1
//!
//! meta 2
//! ...
//! ```
//!
//! The sentiment on the meta line is optional (unlabeled test data). Blocks
//! are separated by exactly one blank line.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tweet polarity. The ordinal order (Negative < Neutral < Positive) is the
/// class order used for every score vector and weight matrix in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sentiment {
    Negative,
    Neutral,
    Positive,
}

impl Sentiment {
    pub const ALL: [Sentiment; 3] = [Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Sentiment> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Negative => "negative",
            Sentiment::Neutral => "neutral",
            Sentiment::Positive => "positive",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sentiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "negative" => Ok(Sentiment::Negative),
            "neutral" => Ok(Sentiment::Neutral),
            "positive" => Ok(Sentiment::Positive),
            _ => Err(format!("unknown sentiment {s:?}")),
        }
    }
}

/// Word-level language annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LangTag {
    /// English.
    Lang1,
    /// Spanish.
    Lang2,
    Other,
    Ne,
    Unk,
    Ambiguous,
    Mixed,
    Fw,
}

impl LangTag {
    pub const ALL: [LangTag; 8] = [
        LangTag::Lang1,
        LangTag::Lang2,
        LangTag::Other,
        LangTag::Ne,
        LangTag::Unk,
        LangTag::Ambiguous,
        LangTag::Mixed,
        LangTag::Fw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LangTag::Lang1 => "lang1",
            LangTag::Lang2 => "lang2",
            LangTag::Other => "other",
            LangTag::Ne => "ne",
            LangTag::Unk => "unk",
            LangTag::Ambiguous => "ambiguous",
            LangTag::Mixed => "mixed",
            LangTag::Fw => "fw",
        }
    }
}

impl fmt::Display for LangTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LangTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LangTag::ALL
            .iter()
            .copied()
            .find(|tag| tag.as_str() == s)
            .ok_or_else(|| format!("unknown language tag {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    text: String,
    lang: LangTag,
}

impl Token {
    /// Fails if `text` is empty or contains a tab or line break.
    pub fn new(text: impl Into<String>, lang: LangTag) -> Result<Token, String> {
        let text = text.into();
        if text.is_empty() {
            return Err("empty token".to_string());
        }
        if text.contains(['\t', '\n', '\r']) {
            return Err(format!("token {text:?} contains a tab or line break"));
        }
        Ok(Token { text, lang })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn lang(&self) -> LangTag {
        self.lang
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: String,
    tokens: Vec<Token>,
    pub sentiment: Option<Sentiment>,
}

impl Tweet {
    pub fn new(id: impl Into<String>, tokens: Vec<Token>, sentiment: Option<Sentiment>) -> Result<Tweet, String> {
        let id = id.into();
        if id.is_empty() || id.contains(char::is_whitespace) {
            return Err(format!("invalid tweet id {id:?}"));
        }
        if tokens.is_empty() {
            return Err(format!("tweet {id:?} has no tokens"));
        }
        Ok(Tweet { id, tokens, sentiment })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Space-joined token text.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (i, tok) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(tok.text());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    name: String,
    tweets: Vec<Tweet>,
}

impl Dataset {
    /// Fails on duplicate tweet ids.
    pub fn new(name: impl Into<String>, tweets: Vec<Tweet>) -> Result<Dataset> {
        let name = name.into();
        let mut seen = HashSet::with_capacity(tweets.len());
        for tweet in &tweets {
            if !seen.insert(tweet.id.as_str()) {
                return Err(Error::DuplicateId {
                    dataset: name,
                    id: tweet.id.clone(),
                });
            }
        }
        Ok(Dataset { name, tweets })
    }

    pub fn empty(name: impl Into<String>) -> Dataset {
        Dataset {
            name: name.into(),
            tweets: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tweet> {
        self.tweets.iter()
    }

    /// Gold labels in dataset order; fails on the first unlabeled tweet.
    pub fn labels(&self) -> Result<Vec<Sentiment>> {
        self.tweets
            .iter()
            .map(|t| t.sentiment.ok_or_else(|| Error::Unlabeled { id: t.id.clone() }))
            .collect()
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Tweet;
    type IntoIter = std::slice::Iter<'a, Tweet>;

    fn into_iter(self) -> Self::IntoIter {
        self.tweets.iter()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassDistribution {
    counts: [u64; 3],
    total: u64,
}

impl ClassDistribution {
    pub fn from_counts(negative: u64, neutral: u64, positive: u64) -> ClassDistribution {
        ClassDistribution {
            counts: [negative, neutral, positive],
            total: negative + neutral + positive,
        }
    }

    pub fn get(&self, sentiment: Sentiment) -> u64 {
        self.counts[sentiment.index()]
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

impl std::ops::Add for ClassDistribution {
    type Output = ClassDistribution;

    fn add(self, rhs: ClassDistribution) -> ClassDistribution {
        ClassDistribution::from_counts(
            self.counts[0] + rhs.counts[0],
            self.counts[1] + rhs.counts[1],
            self.counts[2] + rhs.counts[2],
        )
    }
}

impl fmt::Display for ClassDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in Sentiment::ALL {
            writeln!(f, "{:<9} {}", s.as_str(), self.get(s))?;
        }
        write!(f, "{:<9} {}", "total", self.total)
    }
}

/// Per-class tweet counts. Every tweet must be labeled.
pub fn class_distribution(dataset: &Dataset) -> Result<ClassDistribution> {
    let mut counts = [0u64; 3];
    for tweet in dataset {
        let s = tweet.sentiment.ok_or_else(|| Error::Unlabeled { id: tweet.id.clone() })?;
        counts[s.index()] += 1;
    }
    Ok(ClassDistribution::from_counts(counts[0], counts[1], counts[2]))
}

/// Appends `b` to `a`. Ids are prefixed with the source dataset name
/// (`train:17`) so the result never has collisions; when both datasets share
/// a name the prefixes become `name.1:` and `name.2:`.
pub fn concat_datasets(a: &Dataset, b: &Dataset) -> Dataset {
    let (pa, pb) = if a.name == b.name {
        (format!("{}.1", a.name), format!("{}.2", b.name))
    } else {
        (a.name.clone(), b.name.clone())
    };
    let relabel = |prefix: &str, t: &Tweet| Tweet {
        id: format!("{prefix}:{}", t.id),
        tokens: t.tokens.clone(),
        sentiment: t.sentiment,
    };
    let tweets = a
        .iter()
        .map(|t| relabel(&pa, t))
        .chain(b.iter().map(|t| relabel(&pb, t)))
        .collect();
    Dataset {
        name: format!("{}+{}", a.name, b.name),
        tweets,
    }
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

/// Parses the tweet block format. Line numbers in errors are 1-based.
pub fn parse_conll_str(name: &str, input: &str) -> Result<Dataset> {
    let mut tweets: Vec<Tweet> = Vec::new();
    let mut current: Option<(usize, String, Option<Sentiment>, Vec<Token>)> = None;
    let mut previous_blank = false;
    let mut trailing_blank_from: Option<usize> = None;

    let finish = |block: (usize, String, Option<Sentiment>, Vec<Token>), tweets: &mut Vec<Tweet>| -> Result<()> {
        let (line, id, sentiment, tokens) = block;
        if tokens.is_empty() {
            return Err(Error::Parse {
                line,
                message: format!("empty block for tweet {id:?}"),
            });
        }
        tweets.push(Tweet { id, tokens, sentiment });
        Ok(())
    };

    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if is_blank(line) {
            match current.take() {
                Some(block) => finish(block, &mut tweets)?,
                None if tweets.is_empty() || previous_blank => {
                    trailing_blank_from.get_or_insert(lineno);
                }
                None => {}
            }
            previous_blank = true;
            continue;
        }
        if let Some(at) = trailing_blank_from.take() {
            return Err(Error::Parse {
                line: at,
                message: "empty block".to_string(),
            });
        }
        previous_blank = false;

        match current.as_mut() {
            None => {
                let mut fields = line.split_whitespace();
                if fields.next() != Some("meta") {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("expected meta line, found {line:?}"),
                    });
                }
                let id = fields.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: "meta line has no tweet id".to_string(),
                })?;
                let sentiment = match fields.next() {
                    Some(label) => Some(label.parse::<Sentiment>().map_err(|message| Error::Parse {
                        line: lineno,
                        message,
                    })?),
                    None => None,
                };
                if let Some(extra) = fields.next() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("unexpected field {extra:?} on meta line"),
                    });
                }
                current = Some((lineno, id.to_string(), sentiment, Vec::new()));
            }
            Some((_, _, _, tokens)) => {
                let (text, tag) = line.split_once('\t').ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: format!("expected token<TAB>tag, found {line:?}"),
                })?;
                let lang = tag.parse::<LangTag>().map_err(|_| Error::UnknownLangTag {
                    line: lineno,
                    tag: tag.to_string(),
                })?;
                let token = Token::new(text, lang).map_err(|message| Error::Parse { line: lineno, message })?;
                tokens.push(token);
            }
        }
    }
    if let Some(block) = current.take() {
        finish(block, &mut tweets)?;
    }
    Dataset::new(name, tweets)
}

/// Reads a whole stream and parses it with [`parse_conll_str`].
pub fn parse_conll(name: &str, mut input: impl Read) -> Result<Dataset> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(|e| Error::Parse {
        line: 0,
        message: format!("input is not valid UTF-8 text: {e}"),
    })?;
    parse_conll_str(name, &text)
}

/// Serialises a dataset in the block format accepted by [`parse_conll_str`].
pub fn write_conll(dataset: &Dataset) -> String {
    let mut out = String::new();
    for (i, tweet) in dataset.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("meta ");
        out.push_str(&tweet.id);
        if let Some(s) = tweet.sentiment {
            out.push(' ');
            out.push_str(s.as_str());
        }
        out.push('\n');
        for tok in &tweet.tokens {
            out.push_str(&tok.text);
            out.push('\t');
            out.push_str(tok.lang.as_str());
            out.push('\n');
        }
    }
    out
}

/// Parses a CSV file of monolingual tweets (header row mandatory). Text is
/// whitespace-tokenised and every token is tagged `lang`. Tweet ids are the
/// 1-based data row numbers.
pub fn parse_monolingual_csv(
    name: &str,
    input: impl Read,
    label_column: &str,
    text_column: &str,
    lang: LangTag,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(format!("cannot read CSV header: {e}")))?
        .clone();
    let column = |wanted: &str| {
        headers
            .iter()
            .position(|h| h.trim() == wanted)
            .ok_or_else(|| Error::Config(format!("CSV has no column named {wanted:?}")))
    };
    let label_idx = column(label_column)?;
    let text_idx = column(text_column)?;

    let mut tweets = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Row {
            row,
            message: e.to_string(),
        })?;
        let label = record.get(label_idx).unwrap_or("").trim();
        let sentiment = label
            .parse::<Sentiment>()
            .map_err(|message| Error::Row { row, message })?;
        let text = record.get(text_idx).unwrap_or("");
        let tokens = text
            .split_whitespace()
            .map(|w| Token::new(w, lang))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|message| Error::Row { row, message })?;
        let tweet = Tweet::new(row.to_string(), tokens, Some(sentiment)).map_err(|message| Error::Row { row, message })?;
        tweets.push(tweet);
    }
    Dataset::new(name, tweets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tweet(id: &str, words: &[&str], s: Option<Sentiment>) -> Tweet {
        let tokens = words.iter().map(|w| Token::new(*w, LangTag::Lang1).unwrap()).collect();
        Tweet::new(id, tokens, s).unwrap()
    }

    #[test]
    fn parses_single_block() {
        let d = parse_conll_str("train", "meta 1 positive\nha\tlang2\nu\tlang1\n").unwrap();
        assert_eq!(d.len(), 1);
        let t = &d.tweets()[0];
        assert_eq!(t.id, "1");
        assert_eq!(t.sentiment, Some(Sentiment::Positive));
        let pairs: Vec<_> = t.tokens().iter().map(|t| (t.text(), t.lang())).collect();
        assert_eq!(pairs, vec![("ha", LangTag::Lang2), ("u", LangTag::Lang1)]);
    }

    #[test]
    fn empty_stream_is_empty_dataset() {
        assert!(parse_conll_str("x", "").unwrap().is_empty());
        assert!(parse_conll("x", "".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn unknown_tag_names_tag_and_line() {
        let err = parse_conll_str("x", "meta 1\nok\tlang1\nxyz\tfoo\n").unwrap_err();
        match err {
            Error::UnknownLangTag { line, tag } => {
                assert_eq!(line, 3);
                assert_eq!(tag, "foo");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unlabeled_meta_and_case_insensitive_label() {
        let d = parse_conll_str("x", "meta a\nhola\tlang2\n\nmeta b NEUTRAL\nok\tlang1\n").unwrap();
        assert_eq!(d.tweets()[0].sentiment, None);
        assert_eq!(d.tweets()[1].sentiment, Some(Sentiment::Neutral));
    }

    #[test]
    fn malformed_meta_reports_line() {
        let err = parse_conll_str("x", "meta 1 positive\na\tlang1\n\nhello\tlang1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = parse_conll_str("x", "meta 1 meh\na\tlang1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
        let err = parse_conll_str("x", "meta\na\tlang1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn empty_block_is_an_error() {
        assert!(parse_conll_str("x", "meta 1 positive\n\nmeta 2\na\tlang1\n").is_err());
        assert!(parse_conll_str("x", "meta 1\na\tlang1\n\n\nmeta 2\nb\tlang1\n").is_err());
        assert!(parse_conll_str("x", "meta 1 positive\n").is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = parse_conll_str("x", "meta 1\na\tlang1\n\nmeta 1\nb\tlang1\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateId { .. }));
    }

    #[test]
    fn trailing_blank_lines_tolerated() {
        let d = parse_conll_str("x", "meta 1\na\tlang1\n\n\n").unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn csv_rows_become_lang1_tweets() {
        let csv = "label,text\npositive,\"I love it\"\nnegative,so bad\n";
        let d = parse_monolingual_csv("t4sa", csv.as_bytes(), "label", "text", LangTag::Lang1).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.tweets()[0].sentiment, Some(Sentiment::Positive));
        assert_eq!(d.tweets()[1].sentiment, Some(Sentiment::Negative));
        assert_eq!(d.tweets()[0].text(), "I love it");
        assert!(d.iter().flat_map(|t| t.tokens()).all(|t| t.lang() == LangTag::Lang1));
    }

    #[test]
    fn csv_header_only_is_empty() {
        let d = parse_monolingual_csv("t", "label,text\n".as_bytes(), "label", "text", LangTag::Lang1).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn csv_bad_label_reports_row() {
        let csv = "label,text\npositive,ok\nmeh,whatever\n";
        let err = parse_monolingual_csv("t", csv.as_bytes(), "label", "text", LangTag::Lang1).unwrap_err();
        assert!(matches!(err, Error::Row { row: 2, .. }), "{err:?}");
    }

    #[test]
    fn csv_missing_column_is_config_error() {
        let err = parse_monolingual_csv("t", "label,body\n".as_bytes(), "label", "text", LangTag::Lang1).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn distribution_counts_and_unlabeled() {
        let d = Dataset::new(
            "d",
            vec![
                tweet("1", &["a"], Some(Sentiment::Positive)),
                tweet("2", &["b"], Some(Sentiment::Positive)),
                tweet("3", &["c"], Some(Sentiment::Negative)),
            ],
        )
        .unwrap();
        assert_eq!(class_distribution(&d).unwrap(), ClassDistribution::from_counts(1, 0, 2));
        assert_eq!(class_distribution(&Dataset::empty("e")).unwrap().total(), 0);

        let u = Dataset::new("u", vec![tweet("9", &["x"], None)]).unwrap();
        assert!(matches!(class_distribution(&u), Err(Error::Unlabeled { id }) if id == "9"));
    }

    #[test]
    fn concat_prefixes_ids_and_keeps_order() {
        let a = Dataset::new("a", vec![tweet("1", &["x"], Some(Sentiment::Neutral))]).unwrap();
        let b = Dataset::new("b", vec![tweet("1", &["y"], Some(Sentiment::Negative))]).unwrap();
        let c = concat_datasets(&a, &b);
        let ids: Vec<_> = c.iter().map(|t| t.id.as_str()).collect();
        assert_eq!(ids, ["a:1", "b:1"]);

        let e = concat_datasets(&a, &Dataset::empty("e"));
        assert_eq!(e.len(), 1);
        assert_eq!(e.tweets()[0].id, "a:1");

        let same = concat_datasets(&a, &a);
        assert_eq!(same.tweets()[0].id, "a.1:1");
        assert_eq!(same.tweets()[1].id, "a.2:1");
    }

    #[test]
    fn write_then_parse_roundtrips() {
        let text = "meta 1 positive\nha\tlang2\nu\tlang1\n\nmeta 2\n:)\tother\n";
        let d = parse_conll_str("x", text).unwrap();
        assert_eq!(write_conll(&d), text);
    }
}
