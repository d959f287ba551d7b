//! Text normalization and tokenization.
//!
//! Sentence-structuring punctuation survives as reserved word-like tokens
//! (`#dot`, `#com`, ...). Every other punctuation character is removed.
//! Words are lowercase runs of letters and digits, optionally joined by a
//! single intra-word apostrophe or hyphen.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::corpus::{Corpus, DocumentMeta};
use crate::error::{Error, Result};
use crate::seed;

/// Reserved punctuation symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Punct {
    Dot,
    Question,
    Exclamation,
    Ellipsis,
    Comma,
    Dash,
    Colon,
    Semicolon,
    LeftBracket,
    RightBracket,
}

impl Punct {
    pub const ALL: [Punct; 10] = [
        Punct::Dot,
        Punct::Question,
        Punct::Exclamation,
        Punct::Ellipsis,
        Punct::Comma,
        Punct::Dash,
        Punct::Colon,
        Punct::Semicolon,
        Punct::LeftBracket,
        Punct::RightBracket,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Punct::Dot => "#dot",
            Punct::Question => "#qst",
            Punct::Exclamation => "#exc",
            Punct::Ellipsis => "#ell",
            Punct::Comma => "#com",
            Punct::Dash => "#dsh",
            Punct::Colon => "#col",
            Punct::Semicolon => "#scl",
            Punct::LeftBracket => "#lbr",
            Punct::RightBracket => "#rbr",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Punct> {
        Punct::ALL.into_iter().find(|p| p.symbol() == s)
    }

    fn from_char(c: char) -> Option<Punct> {
        Some(match c {
            '?' => Punct::Question,
            '!' => Punct::Exclamation,
            ',' => Punct::Comma,
            ':' => Punct::Colon,
            ';' => Punct::Semicolon,
            '(' | '[' | '{' => Punct::LeftBracket,
            ')' | ']' | '}' => Punct::RightBracket,
            _ => return None,
        })
    }
}

impl fmt::Display for Punct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// True for reserved punctuation symbols such as `#dot`.
pub fn is_punctuation(token: &str) -> bool {
    Punct::from_symbol(token).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub source_id: String,
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn new(source_id: impl Into<String>, tokens: Vec<String>) -> Self {
        Self {
            source_id: source_id.into(),
            tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Space-joined surface form; tokenizing it again yields the same stream.
    pub fn to_text(&self) -> String {
        self.tokens.join(" ")
    }

    /// Copy of the stream with all punctuation tokens removed.
    pub fn without_punctuation(&self) -> TokenStream {
        TokenStream {
            source_id: self.source_id.clone(),
            tokens: self.tokens.iter().filter(|t| !is_punctuation(t)).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreprocessConfig {
    /// Lowercase tokens whose directly attached full stop is dropped.
    pub abbreviations: HashSet<String>,
    /// Remove `[...]` and `{...}` editorial spans.
    pub remove_annotations: bool,
    /// Drop dashes that open a line (quotation dashes).
    pub drop_quotation_dashes: bool,
}

const ABBREVIATIONS_EN: &str = include_str!("../data/abbreviations_en.txt");
const ABBREVIATIONS_PL: &str = include_str!("../data/abbreviations_pl.txt");

impl PreprocessConfig {
    /// Shipped defaults for `en` and `pl`; other languages get an empty
    /// abbreviation list. Quotation dashes are dropped for Polish only.
    pub fn for_language(language: &str) -> Self {
        let (list, quotation_dashes) = match language {
            "en" => (ABBREVIATIONS_EN, false),
            "pl" => (ABBREVIATIONS_PL, true),
            _ => ("", false),
        };
        Self {
            abbreviations: parse_abbreviations(list),
            remove_annotations: true,
            drop_quotation_dashes: quotation_dashes,
        }
    }

    /// Replaces the abbreviation list with the contents of `path`
    /// (one entry per line, `#` comments).
    pub fn with_abbreviation_file(mut self, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.abbreviations = parse_abbreviations(&raw);
        Ok(self)
    }
}

fn parse_abbreviations(raw: &str) -> HashSet<String> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

fn is_dash(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2012}' | '\u{2013}' | '\u{2014}' | '\u{2015}')
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02bc}' | '-' | '\u{2010}')
}

/// Lowercases, removes configured annotations and quotation dashes, and
/// collapses whitespace runs to single spaces.
pub fn normalize_text(raw: &str, config: &PreprocessConfig) -> String {
    let stripped;
    let mut text = raw;
    if config.remove_annotations {
        stripped = remove_annotations(text);
        text = &stripped;
    }

    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        let mut line = line.trim_start();
        if config.drop_quotation_dashes {
            line = line.trim_start_matches(is_dash);
        }
        for word in line.split_whitespace() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.extend(word.chars().flat_map(char::to_lowercase));
        }
    }
    out
}

fn remove_annotations(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let close = match chars[i] {
            '[' => ']',
            '{' => '}',
            c => {
                out.push(c);
                i += 1;
                continue;
            }
        };
        match chars[i + 1..].iter().position(|&c| c == close) {
            Some(offset) => {
                out.push(' ');
                i += offset + 2;
            }
            None => {
                out.push(chars[i]);
                i += 1;
            }
        }
    }
    out
}

/// Splits normalized text into word and punctuation tokens.
pub fn tokenize(text: &str, config: &PreprocessConfig) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut tokens: Vec<String> = Vec::new();
    let mut i = 0;

    while i < n {
        let c = chars[i];

        if c.is_alphanumeric() {
            let mut word = String::new();
            while i < n {
                let c = chars[i];
                if c.is_alphanumeric() {
                    word.extend(c.to_lowercase());
                    i += 1;
                    continue;
                }
                let next_alnum = i + 1 < n && chars[i + 1].is_alphanumeric();
                if is_joiner(c) && next_alnum {
                    word.push(c);
                    i += 1;
                } else {
                    break;
                }
            }
            tokens.push(word);
            continue;
        }

        if c == '#' {
            if let Some(p) = reserved_at(&chars, i) {
                tokens.push(p.symbol().to_string());
                i += 4;
                continue;
            }
            i += 1;
            continue;
        }

        if c == '.' || c == '\u{2026}' {
            let start = i;
            let mut dots = 0;
            let mut ellipsis_char = false;
            while i < n && (chars[i] == '.' || chars[i] == '\u{2026}') {
                if chars[i] == '.' {
                    dots += 1;
                } else {
                    ellipsis_char = true;
                }
                i += 1;
            }
            if ellipsis_char || dots >= 3 {
                push_punct(&mut tokens, Punct::Ellipsis);
            } else {
                let attached = start > 0 && chars[start - 1].is_alphanumeric();
                let abbreviation =
                    dots == 1 && attached && tokens.last().is_some_and(|t| config.abbreviations.contains(t.as_str()));
                if !abbreviation {
                    push_punct(&mut tokens, Punct::Dot);
                }
            }
            continue;
        }

        if is_dash(c) {
            while i < n && is_dash(chars[i]) {
                i += 1;
            }
            if !(config.drop_quotation_dashes && tokens.is_empty()) {
                push_punct(&mut tokens, Punct::Dash);
            }
            continue;
        }

        if let Some(p) = Punct::from_char(c) {
            while i < n && chars[i] == c {
                i += 1;
            }
            push_punct(&mut tokens, p);
            continue;
        }

        i += 1;
    }
    tokens
}

fn push_punct(tokens: &mut Vec<String>, p: Punct) {
    tokens.push(p.symbol().to_string());
}

/// A reserved symbol written out in text, e.g. `#dot`, followed by a
/// non-word character or the end of the text.
fn reserved_at(chars: &[char], i: usize) -> Option<Punct> {
    if i + 4 > chars.len() {
        return None;
    }
    if chars.get(i + 4).is_some_and(|c| c.is_alphanumeric()) {
        return None;
    }
    let candidate: String = chars[i..i + 4].iter().collect();
    Punct::from_symbol(&candidate)
}

/// Normalizes and tokenizes one document.
pub fn preprocess(source_id: &str, raw: &str, config: &PreprocessConfig) -> TokenStream {
    let text = normalize_text(raw, config);
    TokenStream::new(source_id, tokenize(&text, config))
}

/// A corpus document after preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDocument {
    pub meta: DocumentMeta,
    pub stream: TokenStream,
}

/// Preprocesses every document with the default configuration for its
/// language. Output order follows the corpus.
pub fn tokenize_corpus(corpus: &Corpus) -> Vec<TokenizedDocument> {
    corpus
        .documents()
        .par_iter()
        .map(|doc| {
            let config = PreprocessConfig::for_language(&doc.meta.language);
            TokenizedDocument {
                meta: doc.meta.clone(),
                stream: preprocess(&doc.meta.id, &doc.text, &config),
            }
        })
        .collect()
}

/// Uniformly random permutation of the stream, fully determined by `seed`.
pub fn shuffle_tokens(stream: &TokenStream, seed: u64) -> Result<TokenStream> {
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut tokens = stream.tokens.clone();
    tokens.shuffle(&mut seed::rng(seed));
    Ok(TokenStream::new(stream.source_id.clone(), tokens))
}
