//! Experiment runners. Each runner returns its results as plain data; the
//! `write` methods turn them into tab-separated files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use lexnet::corpus::load_corpus;
use lexnet::features::{
    global_feature_matrix, local_column, local_feature_matrix, top_words, Characteristic, FeatureMatrix, FeatureMode,
    FeatureSpec, LocalFeatures,
};
use lexnet::learn::{hierarchical_cluster, monte_carlo_cv, ConfusionMatrix, Dendrogram};
use lexnet::metrics::{avg_shortest_path_global, PathMode, Weighting};
use lexnet::network::Network;
use lexnet::preprocess::{shuffle_tokens, tokenize_corpus, TokenizedDocument};
use lexnet::synth::synthetic_corpus;
use lexnet::Error;

use crate::config::{ExperimentConfig, ExperimentKind};

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Documents of the configured corpus, tokenized.
pub fn load_documents(config: &ExperimentConfig) -> Result<Vec<TokenizedDocument>> {
    match (&config.manifest, &config.synthetic) {
        (Some(manifest), _) => Ok(tokenize_corpus(&load_corpus(manifest)?)),
        (None, Some(synth)) => Ok(synthetic_corpus(synth)?),
        (None, None) => bail!("either a manifest or a synthetic corpus is required"),
    }
}

/// Documents grouped by language, languages in sorted order.
pub fn by_language(docs: &[TokenizedDocument]) -> BTreeMap<String, Vec<TokenizedDocument>> {
    let mut groups: BTreeMap<String, Vec<TokenizedDocument>> = BTreeMap::new();
    for d in docs {
        groups.entry(d.meta.language.clone()).or_default().push(d.clone());
    }
    groups
}

pub fn feature_matrix(docs: &[TokenizedDocument], config: &ExperimentConfig) -> Result<LocalFeatures> {
    Ok(match config.features.mode {
        FeatureMode::Global => LocalFeatures {
            matrix: global_feature_matrix(docs, &config.features, &config.normalization)?,
            words: BTreeMap::new(),
        },
        FeatureMode::Local => local_feature_matrix(docs, &config.features, &config.normalization)?,
    })
}

fn accuracy_tsv(cm: &ConfusionMatrix) -> String {
    format!(
        "metric\tvalue\naccuracy_mean\t{}\naccuracy_std\t{}\naccuracy_sem\t{}\nerror_mean\t{}\nrepetitions\t{}\n",
        cm.accuracy_mean(),
        cm.accuracy_std(),
        cm.accuracy_sem(),
        cm.error_mean(),
        cm.accuracies().len()
    )
}

fn words_tsv(words: &BTreeMap<String, Vec<String>>) -> String {
    let mut out = String::from("language\trank\tword\n");
    for (lang, list) in words {
        for (i, w) in list.iter().enumerate() {
            let _ = writeln!(out, "{lang}\t{}\t{w}", i + 1);
        }
    }
    out
}

pub fn write_confusion(dir: &Path, prefix: &str, cm: &ConfusionMatrix) -> Result<()> {
    write_file(dir, &format!("{prefix}confusion.tsv"), &cm.to_tsv())?;
    write_file(dir, &format!("{prefix}confusion_counts.tsv"), &cm.counts_tsv())?;
    write_file(dir, &format!("{prefix}accuracy.tsv"), &accuracy_tsv(cm))
}

/// Feature matrix, dendrogram and cross-validated classification.
#[derive(Debug, Clone)]
pub struct ClassificationOutcome {
    pub features: LocalFeatures,
    pub dendrogram: Dendrogram,
    pub confusion: ConfusionMatrix,
}

impl ClassificationOutcome {
    pub fn write(&self, dir: &Path) -> Result<()> {
        write_file(dir, "features.tsv", &self.features.matrix.to_tsv())?;
        if !self.features.words.is_empty() {
            write_file(dir, "words.tsv", &words_tsv(&self.features.words))?;
        }
        write_file(dir, "dendrogram.nwk", &self.dendrogram.to_newick())?;
        write_file(dir, "dendrogram.tsv", &self.dendrogram.to_tsv())?;
        write_confusion(dir, "", &self.confusion)
    }
}

/// Features from the configured spec, clustered and classified.
pub fn run_classification(docs: &[TokenizedDocument], config: &ExperimentConfig) -> Result<ClassificationOutcome> {
    let features = feature_matrix(docs, config)?;
    let dendrogram = hierarchical_cluster(&features.matrix)?;
    let confusion = monte_carlo_cv(&features.matrix, &config.cv)?;
    Ok(ClassificationOutcome {
        features,
        dendrogram,
        confusion,
    })
}

/// Network-level features (the set is taken from the resolved config).
pub fn run_global_experiment(docs: &[TokenizedDocument], config: &ExperimentConfig) -> Result<ClassificationOutcome> {
    if config.features.mode != FeatureMode::Global {
        bail!("global experiment needs a global feature spec");
    }
    run_classification(docs, config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub series: String,
    pub n: usize,
    pub error_mean: f64,
    pub error_std: f64,
    pub error_sem: f64,
}

pub fn series_name(chars: &[Characteristic]) -> String {
    chars.iter().map(|c| c.name()).collect::<Vec<_>>().join("+")
}

/// Columns of `matrix` for the given characteristics and the top `n` words.
pub fn local_columns(matrix: &FeatureMatrix, chars: &[Characteristic], n: usize) -> Result<FeatureMatrix> {
    let wanted: Vec<String> = chars
        .iter()
        .flat_map(|&c| (1..=n).map(move |r| local_column(c, r)))
        .collect();
    Ok(matrix.select_by_name(|name| wanted.iter().any(|w| w == name))?)
}

/// Mean classification error against the number of words, for every series.
/// Features are computed once for `n_max` words; the top-`n` list is a
/// prefix of the top-`n_max` list.
pub fn run_accuracy_curve(
    docs: &[TokenizedDocument],
    config: &ExperimentConfig,
    series: &[Vec<Characteristic>],
    n_max: usize,
) -> Result<Vec<CurvePoint>> {
    let mut all: Vec<Characteristic> = series.iter().flatten().copied().collect();
    all.sort();
    all.dedup();
    let spec = FeatureSpec {
        mode: FeatureMode::Local,
        characteristics: all,
        top_n: n_max,
        ..config.features.clone()
    };
    let features = local_feature_matrix(docs, &spec, &config.normalization)?;
    let mut points = Vec::new();
    for chars in series {
        for n in 1..=n_max {
            let m = local_columns(&features.matrix, chars, n)?;
            let cm = monte_carlo_cv(&m, &config.cv)?;
            points.push(CurvePoint {
                series: series_name(chars),
                n,
                error_mean: cm.error_mean(),
                error_std: cm.accuracy_std(),
                error_sem: cm.accuracy_sem(),
            });
        }
    }
    Ok(points)
}

pub fn curve_tsv(points: &[CurvePoint]) -> String {
    let mut out = String::from("series\tn\terror_mean\terror_std\terror_sem\n");
    for p in points {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            p.series, p.n, p.error_mean, p.error_std, p.error_sem
        );
    }
    out
}

/// Curves plus the classification of the configured local spec.
pub fn run_local_experiment(
    docs: &[TokenizedDocument],
    config: &ExperimentConfig,
) -> Result<(ClassificationOutcome, Vec<CurvePoint>)> {
    let outcome = run_classification(docs, config)?;
    let series: Vec<Vec<Characteristic>> = match config.experiment {
        ExperimentKind::LocalCombo => {
            let mut s: Vec<Vec<Characteristic>> = config.features.characteristics.iter().map(|&c| vec![c]).collect();
            s.push(config.features.characteristics.clone());
            s
        }
        _ => {
            let mut s: Vec<Vec<Characteristic>> = config.curve.characteristics.iter().map(|&c| vec![c]).collect();
            s.extend(config.curve.combinations.iter().cloned());
            s
        }
    };
    let curve = run_accuracy_curve(docs, config, &series, config.curve.n_max)?;
    Ok((outcome, curve))
}

/// Classification with and without punctuation at equal dimension. Both
/// arms use the same seeds, so they see identical splits.
#[derive(Debug, Clone)]
pub struct AblationOutcome {
    pub with_punctuation: LocalFeatures,
    pub without_punctuation: LocalFeatures,
    pub confusion_with: ConfusionMatrix,
    pub confusion_without: ConfusionMatrix,
}

impl AblationOutcome {
    /// Accuracy with punctuation minus accuracy without.
    pub fn delta(&self) -> f64 {
        self.confusion_with.accuracy_mean() - self.confusion_without.accuracy_mean()
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut summary = String::from("arm\tdimensions\taccuracy_mean\taccuracy_std\n");
        for (arm, f, cm) in [
            ("with_punctuation", &self.with_punctuation, &self.confusion_with),
            (
                "without_punctuation",
                &self.without_punctuation,
                &self.confusion_without,
            ),
        ] {
            let _ = writeln!(
                summary,
                "{arm}\t{}\t{}\t{}",
                f.matrix.cols(),
                cm.accuracy_mean(),
                cm.accuracy_std()
            );
        }
        let _ = writeln!(summary, "delta\t\t{}\t", self.delta());
        write_file(dir, "ablation.tsv", &summary)?;
        write_file(dir, "features_with.tsv", &self.with_punctuation.matrix.to_tsv())?;
        write_file(dir, "features_without.tsv", &self.without_punctuation.matrix.to_tsv())?;
        write_file(dir, "words_with.tsv", &words_tsv(&self.with_punctuation.words))?;
        write_file(dir, "words_without.tsv", &words_tsv(&self.without_punctuation.words))?;
        write_confusion(dir, "with_", &self.confusion_with)?;
        write_confusion(dir, "without_", &self.confusion_without)
    }
}

pub fn run_punctuation_ablation(docs: &[TokenizedDocument], config: &ExperimentConfig) -> Result<AblationOutcome> {
    let with = FeatureSpec {
        include_punctuation: true,
        ..config.features.clone()
    };
    let with_punctuation = local_feature_matrix(docs, &with, &config.normalization)?;
    let without_punctuation = local_feature_matrix(docs, &with.without_punctuation(), &config.normalization)?;
    Ok(AblationOutcome {
        confusion_with: monte_carlo_cv(&with_punctuation.matrix, &config.cv)?,
        confusion_without: monte_carlo_cv(&without_punctuation.matrix, &config.cv)?,
        with_punctuation,
        without_punctuation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathRatio {
    pub id: String,
    pub author: String,
    pub shuffled: bool,
    pub weighting: Weighting,
    /// Average path length within the subnetwork of the top words.
    pub subnetwork: f64,
    pub whole: f64,
    pub ratio: f64,
    /// False when either average had to leave out unreachable vertices.
    pub complete: bool,
}

/// Path-length ratio of the top-`top_m` subnetwork to the whole network.
pub fn path_ratio(net: &Network, words: &[String], weighting: Weighting) -> Result<(f64, f64, bool)> {
    let whole = avg_shortest_path_global(net, weighting, PathMode::Component)?;
    let sub = if words.len() >= net.vertex_count() {
        whole
    } else {
        avg_shortest_path_global(&net.subnetwork(words)?, weighting, PathMode::Component)?
    };
    Ok((sub.value, whole.value, sub.complete && whole.complete))
}

/// Ratios for every document, for the original text and one shuffle of
/// it, unweighted and weighted. Each document uses its own top words.
pub fn run_path_ratio(docs: &[TokenizedDocument], config: &ExperimentConfig) -> Result<Vec<PathRatio>> {
    let weightings: &[Weighting] = if config.budget {
        &[Weighting::Unweighted]
    } else {
        &[Weighting::Unweighted, Weighting::Weighted]
    };
    let per_doc: Vec<Vec<PathRatio>> = docs
        .par_iter()
        .map(|doc| {
            let original = Network::from_stream(&doc.stream)?;
            let m = config.top_m.min(original.vertex_count());
            let words = top_words([&doc.stream], m, true)?;
            let shuffled = shuffle_tokens(&doc.stream, config.normalization.shuffle_seed(&doc.meta.id, 0))?;
            let shuffled = Network::from_stream(&shuffled)?;
            let mut rows = Vec::new();
            for (is_shuffled, net) in [(false, &original), (true, &shuffled)] {
                for &w in weightings {
                    let (subnetwork, whole, complete) = path_ratio(net, &words, w)?;
                    rows.push(PathRatio {
                        id: doc.meta.id.clone(),
                        author: doc.meta.author.clone(),
                        shuffled: is_shuffled,
                        weighting: w,
                        subnetwork,
                        whole,
                        ratio: subnetwork / whole,
                        complete,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_doc.into_iter().flatten().collect())
}

pub fn path_ratio_tsv(rows: &[PathRatio]) -> String {
    let mut out = String::from("id\tauthor\tnetwork\tweighting\tl_sub\tl\tratio\tcomplete\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.id,
            r.author,
            if r.shuffled { "shuffled" } else { "original" },
            match r.weighting {
                Weighting::Unweighted => "unweighted",
                Weighting::Weighted => "weighted",
            },
            r.subnetwork,
            r.whole,
            r.ratio,
            r.complete
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimePair {
    pub first: String,
    pub second: String,
    /// Years between the authors' publication-date centroids.
    pub interval: f64,
    pub error_mean: f64,
    pub error_std: f64,
}

/// Mean publication year of each author.
pub fn time_centroids(docs: &[TokenizedDocument]) -> Result<BTreeMap<String, f64>> {
    let mut years: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for d in docs {
        let year = d.meta.year.ok_or_else(|| Error::MissingYear(d.meta.id.clone()))?;
        years.entry(d.meta.author.clone()).or_default().push(year as f64);
    }
    Ok(years
        .into_iter()
        .map(|(a, ys)| (a, ys.iter().sum::<f64>() / ys.len() as f64))
        .collect())
}

/// Two-author classification error against the time between the authors.
pub fn run_pairwise_time(docs: &[TokenizedDocument], config: &ExperimentConfig) -> Result<Vec<TimePair>> {
    let centroids = time_centroids(docs)?;
    let features = local_feature_matrix(docs, &config.features, &config.normalization)?;
    let authors: Vec<&String> = centroids.keys().collect();
    let mut pairs = Vec::new();
    for (i, a) in authors.iter().enumerate() {
        for b in &authors[i + 1..] {
            let rows: Vec<usize> = (0..features.matrix.rows())
                .filter(|&r| {
                    let l = &features.matrix.labels()[r];
                    l == *a || l == *b
                })
                .collect();
            let cm = monte_carlo_cv(&features.matrix.select_rows(&rows)?, &config.cv)?;
            pairs.push(TimePair {
                first: a.to_string(),
                second: b.to_string(),
                interval: (centroids[*a] - centroids[*b]).abs(),
                error_mean: cm.error_mean(),
                error_std: cm.accuracy_std(),
            });
        }
    }
    Ok(pairs)
}

pub fn time_pairs_tsv(pairs: &[TimePair]) -> String {
    let mut out = String::from("first\tsecond\tinterval\terror_mean\terror_std\n");
    for p in pairs {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            p.first, p.second, p.interval, p.error_mean, p.error_std
        );
    }
    out
}

/// Runs one language group of the configured experiment into `dir`.
pub fn run_group(docs: &[TokenizedDocument], config: &ExperimentConfig, dir: &Path) -> Result<()> {
    match config.experiment {
        ExperimentKind::GlobalUnweighted | ExperimentKind::GlobalWeighted | ExperimentKind::GlobalAll => {
            run_global_experiment(docs, config)?.write(dir)
        }
        ExperimentKind::LocalSingleChar | ExperimentKind::LocalCombo => {
            let (outcome, curve) = run_local_experiment(docs, config)?;
            outcome.write(dir)?;
            write_file(dir, "curve.tsv", &curve_tsv(&curve))
        }
        ExperimentKind::PunctuationAblation => run_punctuation_ablation(docs, config)?.write(dir),
        ExperimentKind::PathRatio => write_file(dir, "path_ratio.tsv", &path_ratio_tsv(&run_path_ratio(docs, config)?)),
        ExperimentKind::PairwiseTime => {
            let centroids = time_centroids(docs)?;
            let mut text = String::from("author\tcentroid\n");
            for (a, c) in &centroids {
                let _ = writeln!(text, "{a}\t{c}");
            }
            write_file(dir, "centroids.tsv", &text)?;
            write_file(
                dir,
                "time_pairs.tsv",
                &time_pairs_tsv(&run_pairwise_time(docs, config)?),
            )
        }
    }
}

/// Resolves the config, runs the experiment on every language of the
/// corpus, and records the resolved config as `run.json`. With more than
/// one language, each gets its own subdirectory.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentConfig> {
    let config = config.resolved()?;
    let docs = load_documents(&config)?;
    let groups = by_language(&docs);
    if groups.len() == 1 {
        run_group(&docs, &config, &config.out)?;
    } else {
        for (lang, group) in &groups {
            run_group(group, &config, &config.out.join(lang))?;
        }
    }
    write_file(&config.out, "run.json", &config.to_json())?;
    Ok(config)
}
