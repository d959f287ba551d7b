//! Synthetic authorship corpora.
//!
//! Every author is a first-order Markov chain over one shared vocabulary of
//! words and punctuation marks. All chains start from a common "language":
//! Zipf-like word frequencies and a shared random preference for each word
//! pair. Each author then multiplies the word frequencies and the pair
//! preferences by private log-uniform factors, so authors differ in word
//! usage and in which words they put next to each other.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::DocumentMeta;
use crate::error::{Error, Result};
use crate::preprocess::{Punct, TokenStream, TokenizedDocument};
use crate::seed::{self, Rng as SeededRng};

/// Zipf ranks taken by the punctuation marks, in `Punct::ALL` order.
const PUNCT_RANKS: [usize; 10] = [1, 2, 9, 17, 31, 52, 83, 127, 199, 263];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub authors: usize,
    pub docs_per_author: usize,
    pub tokens_per_doc: usize,
    /// Vocabulary size including the ten punctuation marks.
    pub vocabulary: usize,
    /// Spread of the shared word-pair preferences (natural-log units).
    pub syntax_spread: f64,
    /// Spread of each author's private word-pair factors.
    pub style_spread: f64,
    /// Spread of each author's private word-frequency factors.
    pub frequency_spread: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            authors: 8,
            docs_per_author: 6,
            tokens_per_doc: 20_000,
            vocabulary: 300,
            syntax_spread: 3.0,
            style_spread: 1.0,
            frequency_spread: 0.3,
            seed: 1,
        }
    }
}

/// Token names: punctuation marks at fixed ranks, words elsewhere.
pub fn vocabulary(size: usize) -> Vec<String> {
    let mut word = 0;
    (0..size)
        .map(|rank| match PUNCT_RANKS.iter().position(|&r| r == rank) {
            Some(p) => Punct::ALL[p].symbol().to_string(),
            None => {
                word += 1;
                format!("w{word:03}")
            }
        })
        .collect()
}

/// `exp(spread * u)` with `u` uniform on `[-1, 1]`.
fn log_uniform(rng: &mut SeededRng, spread: f64) -> f64 {
    (spread * rng.gen_range(-1.0..=1.0)).exp()
}

/// Row-wise cumulative transition weights of one author.
struct Chain {
    cumulative: Vec<f64>,
    size: usize,
}

impl Chain {
    fn next(&self, from: usize, rng: &mut SeededRng) -> usize {
        let row = &self.cumulative[from * self.size..(from + 1) * self.size];
        let target = rng.gen::<f64>() * row[self.size - 1];
        row.partition_point(|&c| c <= target).min(self.size - 1)
    }
}

fn check(config: &SynthConfig) -> Result<()> {
    let punct = PUNCT_RANKS.iter().filter(|&&r| r < config.vocabulary).count();
    if config.authors == 0 || config.docs_per_author == 0 {
        return Err(Error::Config("need at least one author and one document".into()));
    }
    if config.vocabulary < 3 || config.vocabulary <= punct + 1 {
        return Err(Error::Config("vocabulary too small".into()));
    }
    if config.tokens_per_doc < 2 {
        return Err(Error::Config("documents need at least 2 tokens".into()));
    }
    Ok(())
}

fn author_chains(config: &SynthConfig) -> Vec<Chain> {
    let n = config.vocabulary;
    let mut shared = seed::rng(seed::derive(config.seed, "syntax", 0));
    let zipf: Vec<f64> = (0..n).map(|r| 1.0 / (r + 1) as f64).collect();
    let syntax: Vec<f64> = (0..n * n)
        .map(|_| log_uniform(&mut shared, config.syntax_spread))
        .collect();
    (0..config.authors)
        .map(|a| {
            let mut rng = seed::rng(seed::derive(config.seed, "author", a as u64));
            let frequency: Vec<f64> = zipf
                .iter()
                .map(|z| z * log_uniform(&mut rng, config.frequency_spread))
                .collect();
            let mut cumulative = Vec::with_capacity(n * n);
            for i in 0..n {
                let mut total = 0.0;
                for j in 0..n {
                    let style = log_uniform(&mut rng, config.style_spread);
                    if i != j {
                        total += frequency[j] * syntax[i * n + j] * style;
                    }
                    cumulative.push(total);
                }
            }
            Chain { cumulative, size: n }
        })
        .collect()
}

pub fn author_label(a: usize) -> String {
    format!("author{}", a + 1)
}

/// Generates `authors * docs_per_author` token streams, grouped by author.
pub fn synthetic_corpus(config: &SynthConfig) -> Result<Vec<TokenizedDocument>> {
    check(config)?;
    let vocab = vocabulary(config.vocabulary);
    let chains = author_chains(config);
    let mut docs = Vec::with_capacity(config.authors * config.docs_per_author);
    for (a, chain) in chains.iter().enumerate() {
        for d in 0..config.docs_per_author {
            let id = format!("{}-doc{}", author_label(a), d + 1);
            let mut rng = seed::rng(seed::derive(config.seed, &id, 0));
            let mut state = rng.gen_range(0..config.vocabulary);
            let tokens = (0..config.tokens_per_doc)
                .map(|_| {
                    state = chain.next(state, &mut rng);
                    vocab[state].clone()
                })
                .collect();
            docs.push(TokenizedDocument {
                meta: DocumentMeta {
                    id: id.clone(),
                    author: author_label(a),
                    language: "synthetic".into(),
                    year: Some(1800 + 10 * a as i32 + d as i32),
                    path: Default::default(),
                },
                stream: TokenStream::new(id, tokens),
            });
        }
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::is_punctuation;
    use std::collections::HashSet;

    fn small() -> SynthConfig {
        SynthConfig {
            authors: 3,
            docs_per_author: 2,
            tokens_per_doc: 3000,
            vocabulary: 60,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn vocabulary_mixes_words_and_punctuation() {
        let v = vocabulary(300);
        assert_eq!(v.len(), 300);
        assert_eq!(v.iter().filter(|t| is_punctuation(t)).count(), 10);
        assert_eq!(v.iter().collect::<HashSet<_>>().len(), 300);
        assert_eq!(v[0], "w001");
        assert_eq!(v[1], "#dot");
    }

    #[test]
    fn shape_and_determinism() {
        let docs = synthetic_corpus(&small()).unwrap();
        assert_eq!(docs.len(), 6);
        assert!(docs.iter().all(|d| d.stream.len() == 3000));
        assert_eq!(docs[2].meta.author, "author2");
        assert_eq!(docs, synthetic_corpus(&small()).unwrap());
        let other = SynthConfig { seed: 2, ..small() };
        assert_ne!(docs, synthetic_corpus(&other).unwrap());
    }

    #[test]
    fn no_immediate_repeats() {
        for d in synthetic_corpus(&small()).unwrap() {
            assert!(d.stream.tokens.windows(2).all(|w| w[0] != w[1]));
        }
    }

    #[test]
    fn rejects_degenerate_configs() {
        assert!(synthetic_corpus(&SynthConfig { authors: 0, ..small() }).is_err());
        assert!(synthetic_corpus(&SynthConfig {
            vocabulary: 2,
            ..small()
        })
        .is_err());
    }
}
