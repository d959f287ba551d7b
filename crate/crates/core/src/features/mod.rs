//! Normalized feature vectors.
//!
//! A characteristic of a text's network is divided by its mean over `k`
//! networks built from shuffled copies of the same text. The shuffled texts
//! keep every word frequency and destroy word order, so the ratio isolates
//! order-dependent structure. Vertex strength is the exception: it is fixed
//! by word frequency, so it is reported as a share of the total strength.

mod matrix;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{self, GlobalSelection, PathMode, Weighting};
use crate::network::{Network, VertexId};
use crate::preprocess::{is_punctuation, shuffle_tokens, TokenStream, TokenizedDocument};
use crate::seed;

pub use matrix::{FeatureMatrix, MISSING};

/// A network characteristic usable as a feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Characteristic {
    #[serde(rename = "deg")]
    Degree,
    #[serde(rename = "str")]
    Strength,
    #[serde(rename = "C_u")]
    ClusteringUnweighted,
    #[serde(rename = "C_w")]
    ClusteringWeighted,
    #[serde(rename = "l_u")]
    PathUnweighted,
    #[serde(rename = "l_w")]
    PathWeighted,
    #[serde(rename = "r_u")]
    AssortativityUnweighted,
    #[serde(rename = "r_w")]
    AssortativityWeighted,
    #[serde(rename = "Q_u")]
    ModularityUnweighted,
    #[serde(rename = "Q_w")]
    ModularityWeighted,
}

impl Characteristic {
    pub const ALL: [Characteristic; 10] = [
        Characteristic::Degree,
        Characteristic::Strength,
        Characteristic::ClusteringUnweighted,
        Characteristic::ClusteringWeighted,
        Characteristic::PathUnweighted,
        Characteristic::PathWeighted,
        Characteristic::AssortativityUnweighted,
        Characteristic::AssortativityWeighted,
        Characteristic::ModularityUnweighted,
        Characteristic::ModularityWeighted,
    ];

    /// The four unweighted network-level characteristics.
    pub const GLOBAL_UNWEIGHTED: [Characteristic; 4] = [
        Characteristic::PathUnweighted,
        Characteristic::ClusteringUnweighted,
        Characteristic::AssortativityUnweighted,
        Characteristic::ModularityUnweighted,
    ];

    pub const GLOBAL_WEIGHTED: [Characteristic; 4] = [
        Characteristic::PathWeighted,
        Characteristic::ClusteringWeighted,
        Characteristic::AssortativityWeighted,
        Characteristic::ModularityWeighted,
    ];

    /// Vertex-level characteristics.
    pub const LOCAL: [Characteristic; 6] = [
        Characteristic::Degree,
        Characteristic::Strength,
        Characteristic::ClusteringUnweighted,
        Characteristic::ClusteringWeighted,
        Characteristic::PathUnweighted,
        Characteristic::PathWeighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Characteristic::Degree => "deg",
            Characteristic::Strength => "str",
            Characteristic::ClusteringUnweighted => "C_u",
            Characteristic::ClusteringWeighted => "C_w",
            Characteristic::PathUnweighted => "l_u",
            Characteristic::PathWeighted => "l_w",
            Characteristic::AssortativityUnweighted => "r_u",
            Characteristic::AssortativityWeighted => "r_w",
            Characteristic::ModularityUnweighted => "Q_u",
            Characteristic::ModularityWeighted => "Q_w",
        }
    }

    pub fn is_local(self) -> bool {
        Self::LOCAL.contains(&self)
    }

    pub fn is_global(self) -> bool {
        !matches!(self, Characteristic::Degree | Characteristic::Strength)
    }

    pub fn is_path(self) -> bool {
        matches!(self, Characteristic::PathUnweighted | Characteristic::PathWeighted)
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Characteristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidSpec(format!("unknown characteristic {s:?}")))
    }
}

/// Shuffled-baseline settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizationConfig {
    /// Number of shuffled copies per document.
    pub k: usize,
    pub base_seed: u64,
    /// Baseline means closer to zero than this leave the ratio undefined.
    pub epsilon: f64,
    pub louvain_restarts: usize,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self {
            k: 50,
            base_seed: 0,
            epsilon: 1e-12,
            louvain_restarts: 1,
        }
    }
}

impl NormalizationConfig {
    pub fn new(k: usize, base_seed: u64) -> Result<Self> {
        let config = Self {
            k,
            base_seed,
            ..Self::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSpec("shuffle count k must be at least 1".into()));
        }
        Ok(())
    }

    /// Seed of shuffle `index` of document `doc_id`.
    pub fn shuffle_seed(&self, doc_id: &str, index: usize) -> u64 {
        seed::derive(self.base_seed, doc_id, index as u64)
    }

    /// Seed of the community detection on the networks of `doc_id`.
    pub fn louvain_seed(&self, doc_id: &str) -> u64 {
        seed::derive(self.base_seed, &format!("{doc_id}/louvain"), 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    Global,
    Local,
}

/// Which features to extract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureSpec {
    pub mode: FeatureMode,
    pub characteristics: Vec<Characteristic>,
    /// Number of most frequent words (local mode).
    pub top_n: usize,
    /// When false, punctuation tokens are removed from every text before
    /// networks are built.
    pub include_punctuation: bool,
    /// With punctuation removed, fill the word list up to `top_n` with the
    /// next most frequent words instead of shrinking it.
    pub replace_removed_punctuation: bool,
}

impl Default for FeatureSpec {
    /// Weighted clustering of the 12 most frequent words.
    fn default() -> Self {
        Self::local(&[Characteristic::ClusteringWeighted], 12)
    }
}

impl FeatureSpec {
    pub fn global(characteristics: &[Characteristic]) -> Self {
        Self {
            mode: FeatureMode::Global,
            characteristics: characteristics.to_vec(),
            top_n: 0,
            include_punctuation: true,
            replace_removed_punctuation: false,
        }
    }

    pub fn local(characteristics: &[Characteristic], top_n: usize) -> Self {
        Self {
            mode: FeatureMode::Local,
            characteristics: characteristics.to_vec(),
            top_n,
            include_punctuation: true,
            replace_removed_punctuation: false,
        }
    }

    /// Same spec with punctuation removed and the word list refilled.
    pub fn without_punctuation(&self) -> Self {
        Self {
            include_punctuation: false,
            replace_removed_punctuation: true,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.characteristics.is_empty() {
            return Err(Error::InvalidSpec("no characteristics selected".into()));
        }
        for (i, c) in self.characteristics.iter().enumerate() {
            if self.characteristics[..i].contains(c) {
                return Err(Error::InvalidSpec(format!("{c} listed twice")));
            }
            let ok = match self.mode {
                FeatureMode::Global => c.is_global(),
                FeatureMode::Local => c.is_local(),
            };
            if !ok {
                return Err(Error::InvalidSpec(format!(
                    "{c} is not a {} characteristic",
                    match self.mode {
                        FeatureMode::Global => "network-level",
                        FeatureMode::Local => "vertex-level",
                    }
                )));
            }
        }
        if self.mode == FeatureMode::Local && self.top_n == 0 {
            return Err(Error::InvalidSpec("local features need top_n >= 1".into()));
        }
        Ok(())
    }
}

/// `value / mean(baseline)`; `None` when the mean is within `1e-12` of zero.
pub fn normalize_characteristic(value: f64, baseline: &[f64]) -> Result<Option<f64>> {
    normalize_with_epsilon(value, baseline, NormalizationConfig::default().epsilon)
}

pub fn normalize_with_epsilon(value: f64, baseline: &[f64], epsilon: f64) -> Result<Option<f64>> {
    if baseline.is_empty() {
        return Err(Error::EmptyBaseline);
    }
    let mean = crate::numeric::mean(baseline).unwrap_or(0.0);
    if mean.abs() < epsilon {
        return Ok(None);
    }
    Ok(Some(value / mean).filter(|r| r.is_finite()))
}

/// Normalization with undefined baseline instances skipped. At least half
/// of the `k` shuffles must be usable.
fn normalize_partial(value: Option<f64>, baseline: &[Option<f64>], norm: &NormalizationConfig) -> Option<f64> {
    let value = value?;
    let valid: Vec<f64> = baseline.iter().flatten().copied().collect();
    if valid.is_empty() || 2 * valid.len() < norm.k {
        return None;
    }
    normalize_with_epsilon(value, &valid, norm.epsilon).ok().flatten()
}

/// Strength of `v` as a share of the total strength, which equals the
/// word's relative frequency.
pub fn normalized_strength(net: &Network, v: VertexId) -> Result<f64> {
    let s = metrics::strength(net, v)?;
    Ok(s as f64 / (2 * net.total_weight()) as f64)
}

/// The `n` most frequent tokens over all streams, ties broken
/// lexicographically. Without punctuation, the next ranked words take the
/// places of punctuation marks.
pub fn top_words<'a>(
    streams: impl IntoIterator<Item = &'a TokenStream>,
    n: usize,
    include_punctuation: bool,
) -> Result<Vec<String>> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for stream in streams {
        for t in &stream.tokens {
            *counts.entry(t.as_str()).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|(t, _)| include_punctuation || !is_punctuation(t))
        .collect();
    if ranked.len() < n {
        return Err(Error::NotEnoughWords {
            requested: n,
            available: ranked.len(),
        });
    }
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    Ok(ranked.into_iter().take(n).map(|(t, _)| t.to_string()).collect())
}

/// Selected words for a spec: with punctuation removed but not replaced,
/// the list shrinks to the words among the top `n` tokens.
fn select_words(docs: &[&TokenizedDocument], spec: &FeatureSpec) -> Result<Vec<String>> {
    let streams = docs.iter().map(|d| &d.stream);
    if spec.include_punctuation || spec.replace_removed_punctuation {
        top_words(streams, spec.top_n, spec.include_punctuation)
    } else {
        let mut words = top_words(streams, spec.top_n, true)?;
        words.retain(|w| !is_punctuation(w));
        Ok(words)
    }
}

fn prepared_stream(doc: &TokenizedDocument, spec: &FeatureSpec) -> TokenStream {
    if spec.include_punctuation {
        doc.stream.clone()
    } else {
        doc.stream.without_punctuation()
    }
}

/// Network of the document (`index == 0`) or of its shuffle `index - 1`.
fn baseline_network(stream: &TokenStream, doc_id: &str, index: usize, norm: &NormalizationConfig) -> Result<Network> {
    if index == 0 {
        Network::from_stream(stream)
    } else {
        Network::from_stream(&shuffle_tokens(stream, norm.shuffle_seed(doc_id, index - 1))?)
    }
}

/// Raw network-level characteristics in the requested order.
pub fn global_values(
    net: &Network,
    characteristics: &[Characteristic],
    louvain_seed: u64,
    louvain_restarts: usize,
) -> Result<Vec<Option<f64>>> {
    use Characteristic as C;
    let want = |c| characteristics.contains(&c);
    let select = GlobalSelection {
        clustering: [want(C::ClusteringUnweighted), want(C::ClusteringWeighted)],
        path: [want(C::PathUnweighted), want(C::PathWeighted)],
        assortativity: [want(C::AssortativityUnweighted), want(C::AssortativityWeighted)],
        modularity: [want(C::ModularityUnweighted), want(C::ModularityWeighted)],
        louvain_seed,
        louvain_restarts,
    };
    let g = metrics::global_metrics(net, &select)?;
    characteristics
        .iter()
        .map(|&c| {
            Ok(match c {
                C::ClusteringUnweighted => g.clustering_unweighted,
                C::ClusteringWeighted => g.clustering_weighted,
                C::PathUnweighted => g.path_unweighted,
                C::PathWeighted => g.path_weighted,
                C::AssortativityUnweighted => g.assortativity_unweighted,
                C::AssortativityWeighted => g.assortativity_weighted,
                C::ModularityUnweighted => g.modularity_unweighted,
                C::ModularityWeighted => g.modularity_weighted,
                C::Degree | C::Strength => {
                    return Err(Error::InvalidSpec(format!("{c} is not a network-level characteristic")))
                }
            })
        })
        .collect()
}

/// Raw vertex-level characteristics, characteristic-major: for each
/// characteristic, one value per word. Strength is left out; it is not
/// normalized by shuffling.
fn local_values(net: &Network, words: &[String], characteristics: &[Characteristic]) -> Vec<Option<f64>> {
    use Characteristic as C;
    let vertices: Vec<Option<VertexId>> = words.iter().map(|w| net.vertex(w)).collect();
    let needs_clustering = characteristics
        .iter()
        .any(|c| matches!(c, C::ClusteringUnweighted | C::ClusteringWeighted));
    let clustering: Vec<_> = vertices
        .iter()
        .map(|v| match (v, needs_clustering) {
            (Some(v), true) => metrics::local_clustering(net, *v).ok(),
            _ => None,
        })
        .collect();
    let path = |v: VertexId, w| {
        metrics::avg_shortest_path_local(net, v, w, PathMode::Component)
            .ok()
            .map(|p| p.value)
    };
    let mut out = Vec::with_capacity(words.len() * characteristics.len());
    for &c in characteristics.iter().filter(|&&c| c != C::Strength) {
        for (i, v) in vertices.iter().enumerate() {
            let Some(v) = *v else {
                out.push(None);
                continue;
            };
            out.push(match c {
                C::Degree => Some(net.degree(v) as f64),
                C::ClusteringUnweighted => clustering[i].map(|x| x.unweighted),
                C::ClusteringWeighted => clustering[i].map(|x| x.weighted),
                C::PathUnweighted => path(v, Weighting::Unweighted),
                C::PathWeighted => path(v, Weighting::Weighted),
                _ => unreachable!("filtered by spec validation"),
            });
        }
    }
    out
}

/// Normalized network-level feature row of one document.
pub fn global_feature_vector(
    doc: &TokenizedDocument,
    spec: &FeatureSpec,
    norm: &NormalizationConfig,
) -> Result<Vec<Option<f64>>> {
    let m = global_feature_matrix(std::slice::from_ref(doc), spec, norm)?;
    Ok(m.row(0).to_vec())
}

/// One normalized network-level feature row per document.
pub fn global_feature_matrix(
    docs: &[TokenizedDocument],
    spec: &FeatureSpec,
    norm: &NormalizationConfig,
) -> Result<FeatureMatrix> {
    spec.validate()?;
    norm.validate()?;
    if spec.mode != FeatureMode::Global {
        return Err(Error::InvalidSpec("expected a global feature spec".into()));
    }
    let streams: Vec<TokenStream> = docs.iter().map(|d| prepared_stream(d, spec)).collect();
    let per_network = run_tasks(docs.len(), norm.k, |d, i| {
        let id = &docs[d].meta.id;
        let net = baseline_network(&streams[d], id, i, norm)?;
        global_values(
            &net,
            &spec.characteristics,
            norm.louvain_seed(id),
            norm.louvain_restarts,
        )
    })?;
    let rows = per_network
        .chunks(norm.k + 1)
        .map(|nets| normalize_rows(nets, norm))
        .collect();
    let columns = spec.characteristics.iter().map(|c| c.name().to_string()).collect();
    build_matrix(docs, columns, rows)
}

/// Normalized vertex-level features of the most frequent words, with the
/// selected word list of each language.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFeatures {
    pub matrix: FeatureMatrix,
    pub words: BTreeMap<String, Vec<String>>,
}

/// Column name of a local feature: characteristic and 1-based word rank.
pub fn local_column(c: Characteristic, rank: usize) -> String {
    format!("{}[{}]", c.name(), rank)
}

/// Normalized local characteristics of the top words, one row per
/// document. Words are ranked per language over all documents of that
/// language. Columns are characteristic-major, so `C_w[3]` is the weighted
/// clustering of the third most frequent word of the row's language.
pub fn local_feature_matrix(
    docs: &[TokenizedDocument],
    spec: &FeatureSpec,
    norm: &NormalizationConfig,
) -> Result<LocalFeatures> {
    spec.validate()?;
    norm.validate()?;
    if spec.mode != FeatureMode::Local {
        return Err(Error::InvalidSpec("expected a local feature spec".into()));
    }
    let mut by_language: BTreeMap<String, Vec<&TokenizedDocument>> = BTreeMap::new();
    for d in docs {
        by_language.entry(d.meta.language.clone()).or_default().push(d);
    }
    let mut words = BTreeMap::new();
    for (lang, group) in &by_language {
        words.insert(lang.clone(), select_words(group, spec)?);
    }
    let width = words.values().map(Vec::len).min().unwrap_or(0);
    let doc_words: Vec<&[String]> = docs.iter().map(|d| &words[&d.meta.language][..width]).collect();
    let streams: Vec<TokenStream> = docs.iter().map(|d| prepared_stream(d, spec)).collect();
    let shuffled: Vec<Characteristic> = spec
        .characteristics
        .iter()
        .copied()
        .filter(|&c| c != Characteristic::Strength)
        .collect();

    let per_network = if shuffled.is_empty() {
        Vec::new()
    } else {
        run_tasks(docs.len(), norm.k, |d, i| {
            let net = baseline_network(&streams[d], &docs[d].meta.id, i, norm)?;
            Ok(local_values(&net, doc_words[d], &shuffled))
        })?
    };

    let mut rows = Vec::with_capacity(docs.len());
    for d in 0..docs.len() {
        let normalized = if shuffled.is_empty() {
            Vec::new()
        } else {
            normalize_rows(&per_network[d * (norm.k + 1)..(d + 1) * (norm.k + 1)], norm)
        };
        let strengths: Vec<Option<f64>> = if spec.characteristics.contains(&Characteristic::Strength) {
            let net = Network::from_stream(&streams[d])?;
            doc_words[d]
                .iter()
                .map(|w| net.vertex(w).and_then(|v| normalized_strength(&net, v).ok()))
                .collect()
        } else {
            Vec::new()
        };
        let mut row = Vec::with_capacity(width * spec.characteristics.len());
        let mut next_shuffled = normalized.chunks(width.max(1));
        for &c in &spec.characteristics {
            if c == Characteristic::Strength {
                row.extend_from_slice(&strengths);
            } else if width > 0 {
                row.extend_from_slice(next_shuffled.next().expect("one block per characteristic"));
            }
        }
        rows.push(row);
    }
    let columns = spec
        .characteristics
        .iter()
        .flat_map(|&c| (1..=width).map(move |r| local_column(c, r)))
        .collect();
    Ok(LocalFeatures {
        matrix: build_matrix(docs, columns, rows)?,
        words,
    })
}

/// Evaluates `task(doc, index)` for every document and every network index
/// `0..=k` in parallel; results come back in document-major order.
fn run_tasks<T, F>(docs: usize, k: usize, task: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> Result<T> + Sync,
{
    (0..docs * (k + 1))
        .into_par_iter()
        .map(|t| task(t / (k + 1), t % (k + 1)))
        .collect()
}

/// Normalizes the original network's values (first entry) against the
/// shuffled ones (the rest), position by position.
fn normalize_rows(nets: &[Vec<Option<f64>>], norm: &NormalizationConfig) -> Vec<Option<f64>> {
    let (original, baselines) = nets.split_first().expect("original network present");
    let mut column = Vec::with_capacity(baselines.len());
    (0..original.len())
        .map(|j| {
            column.clear();
            column.extend(baselines.iter().map(|b| b[j]));
            normalize_partial(original[j], &column, norm)
        })
        .collect()
}

fn build_matrix(
    docs: &[TokenizedDocument],
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
) -> Result<FeatureMatrix> {
    FeatureMatrix::new(
        docs.iter().map(|d| d.meta.id.clone()).collect(),
        docs.iter().map(|d| d.meta.author.clone()).collect(),
        columns,
        rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentMeta;
    use crate::metrics::clustering_weighted;

    fn doc(id: &str, author: &str, tokens: &[&str]) -> TokenizedDocument {
        TokenizedDocument {
            meta: DocumentMeta {
                id: id.into(),
                author: author.into(),
                language: "en".into(),
                year: None,
                path: Default::default(),
            },
            stream: TokenStream::new(id, tokens.iter().map(|t| t.to_string()).collect()),
        }
    }

    fn text(seed: u64, len: usize) -> Vec<String> {
        use rand::Rng;
        let mut rng = seed::rng(seed);
        let vocab = [
            "the", "a", "of", "#com", "#dot", "cat", "dog", "and", "ran", "sat", "on", "mat",
        ];
        (0..len)
            .map(|_| vocab[rng.gen_range(0..vocab.len())].to_string())
            .collect()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_characteristic(2.0, &[1.0, 1.0]).unwrap(), Some(2.0));
        assert_eq!(normalize_characteristic(0.37, &[0.37; 5]).unwrap(), Some(1.0));
        assert_eq!(normalize_characteristic(1.0, &[0.0, 0.0]).unwrap(), None);
        assert!(matches!(normalize_characteristic(1.0, &[]), Err(Error::EmptyBaseline)));
    }

    #[test]
    fn partial_baselines_need_half_of_k() {
        let norm = NormalizationConfig::new(4, 0).unwrap();
        assert_eq!(
            normalize_partial(Some(2.0), &[Some(1.0), None, Some(1.0), None], &norm),
            Some(2.0)
        );
        assert_eq!(
            normalize_partial(Some(2.0), &[Some(1.0), None, None, None], &norm),
            None
        );
        assert_eq!(normalize_partial(None, &[Some(1.0); 4], &norm), None);
    }

    #[test]
    fn normalized_strength_examples() {
        let net = Network::from_tokens(&["a", "b", "a", "#dot"]).unwrap();
        let a = net.vertex("a").unwrap();
        assert_eq!(normalized_strength(&net, a).unwrap(), 0.5);
        let pair = Network::from_tokens(&["a", "b"]).unwrap();
        assert_eq!(normalized_strength(&pair, 0).unwrap(), 0.5);
        assert!(normalized_strength(&net, 7).is_err());
        let total: f64 = (0..net.vertex_count())
            .map(|v| normalized_strength(&net, v).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn top_word_examples() {
        let s = TokenStream::new("d", vec!["a".into(), "b".into(), "a".into(), "#dot".into()]);
        assert_eq!(top_words([&s], 2, true).unwrap(), ["a", "#dot"]);
        assert_eq!(top_words([&s], 1, true).unwrap(), ["a"]);
        assert_eq!(top_words([&s], 2, false).unwrap(), ["a", "b"]);
        assert!(matches!(
            top_words([&s], 4, true),
            Err(Error::NotEnoughWords {
                requested: 4,
                available: 3
            })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(FeatureSpec::local(&[Characteristic::ClusteringWeighted], 0)
            .validate()
            .is_err());
        assert!(FeatureSpec::global(&[Characteristic::Degree]).validate().is_err());
        assert!(FeatureSpec::local(&[Characteristic::ModularityWeighted], 3)
            .validate()
            .is_err());
        assert!(FeatureSpec::global(&[]).validate().is_err());
        assert!(FeatureSpec::global(&Characteristic::GLOBAL_UNWEIGHTED)
            .validate()
            .is_ok());
        assert_eq!(
            "c_w".parse::<Characteristic>().unwrap(),
            Characteristic::ClusteringWeighted
        );
    }

    #[test]
    fn global_rows_have_spec_dimension() {
        let d = doc("d1", "A", &text(1, 400).iter().map(String::as_str).collect::<Vec<_>>());
        let norm = NormalizationConfig::new(3, 9).unwrap();
        let four = global_feature_vector(&d, &FeatureSpec::global(&Characteristic::GLOBAL_UNWEIGHTED), &norm).unwrap();
        assert_eq!(four.len(), 4);
        let all: Vec<_> = Characteristic::GLOBAL_UNWEIGHTED
            .into_iter()
            .chain(Characteristic::GLOBAL_WEIGHTED)
            .collect();
        let eight = global_feature_vector(&d, &FeatureSpec::global(&all), &norm).unwrap();
        assert_eq!(eight.len(), 8);
        assert_eq!(&eight[..4], &four[..]);
    }

    #[test]
    fn local_matrix_matches_direct_computation() {
        let t1 = text(2, 300);
        let t2 = text(3, 300);
        let docs = vec![
            doc("d1", "A", &t1.iter().map(String::as_str).collect::<Vec<_>>()),
            doc("d2", "B", &t2.iter().map(String::as_str).collect::<Vec<_>>()),
        ];
        let norm = NormalizationConfig::new(5, 4).unwrap();
        let spec = FeatureSpec::local(&[Characteristic::Strength, Characteristic::ClusteringWeighted], 3);
        let out = local_feature_matrix(&docs, &spec, &norm).unwrap();
        assert_eq!(
            out.matrix.columns(),
            ["str[1]", "str[2]", "str[3]", "C_w[1]", "C_w[2]", "C_w[3]"]
        );
        let words = &out.words["en"];

        let d = &docs[1];
        let net = Network::from_stream(&d.stream).unwrap();
        let v = net.vertex(&words[0]).unwrap();
        let mut baseline = Vec::new();
        for i in 0..norm.k {
            let s = shuffle_tokens(&d.stream, norm.shuffle_seed("d2", i)).unwrap();
            let b = Network::from_stream(&s).unwrap();
            baseline.push(clustering_weighted(&b, b.vertex(&words[0]).unwrap()).unwrap());
        }
        let expected = normalize_characteristic(clustering_weighted(&net, v).unwrap(), &baseline).unwrap();
        assert_eq!(out.matrix.get(1, 3), expected);
        assert_eq!(out.matrix.get(1, 0), Some(normalized_strength(&net, v).unwrap()));
    }

    #[test]
    fn absent_word_is_masked_in_that_row_only() {
        let docs = vec![
            doc("d1", "A", &["x", "y", "x", "z", "x", "y"]),
            doc("d2", "B", &["y", "z", "y", "z", "w", "y"]),
        ];
        let norm = NormalizationConfig::new(2, 0).unwrap();
        let spec = FeatureSpec::local(&[Characteristic::Strength, Characteristic::Degree], 3);
        let out = local_feature_matrix(&docs, &spec, &norm).unwrap();
        // y (5), x (3), z (3): x is absent from d2
        assert_eq!(out.words["en"], ["y", "x", "z"]);
        assert!(out.matrix.get(1, 1).is_none());
        assert!(out.matrix.get(1, 4).is_none());
        assert!(out.matrix.get(0, 1).is_some());
        assert_eq!(out.matrix.missing_count(), 2);
    }

    #[test]
    fn punctuation_removal_keeps_dimension_when_replacing() {
        let t = text(5, 500);
        let docs = vec![doc("d1", "A", &t.iter().map(String::as_str).collect::<Vec<_>>())];
        let norm = NormalizationConfig::new(2, 0).unwrap();
        let spec = FeatureSpec::local(&[Characteristic::ClusteringWeighted], 6);
        let with = local_feature_matrix(&docs, &spec, &norm).unwrap();
        let without = local_feature_matrix(&docs, &spec.without_punctuation(), &norm).unwrap();
        assert_eq!(with.matrix.cols(), without.matrix.cols());
        assert!(without.words["en"].iter().all(|w| !is_punctuation(w)));
        let shrunk = FeatureSpec {
            replace_removed_punctuation: false,
            ..spec.without_punctuation()
        };
        let shrunk = local_feature_matrix(&docs, &shrunk, &norm).unwrap();
        let punct = with.words["en"].iter().filter(|w| is_punctuation(w)).count();
        assert_eq!(shrunk.matrix.cols(), 6 - punct);
    }

    #[test]
    fn extraction_is_deterministic() {
        let t = text(6, 300);
        let docs = vec![doc("d1", "A", &t.iter().map(String::as_str).collect::<Vec<_>>())];
        let norm = NormalizationConfig::new(4, 11).unwrap();
        let spec = FeatureSpec::global(&Characteristic::GLOBAL_UNWEIGHTED);
        let a = global_feature_matrix(&docs, &spec, &norm).unwrap();
        let b = global_feature_matrix(&docs, &spec, &norm).unwrap();
        assert_eq!(a.to_tsv(), b.to_tsv());
    }
}
