use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use lexnet::features::{Characteristic, FeatureMode, FeatureSpec};
use lexnet::synth::SynthConfig;
use lexnet_cli::experiments::{self, write_file};
use lexnet_cli::{ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(
    name = "lexnet",
    version,
    about = "Authorship attribution with word-adjacency networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and tokenize a corpus and report per-document statistics.
    Ingest(Common),
    /// Compute a feature matrix.
    Features {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Hierarchical clustering of the feature vectors.
    Cluster {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Cross-validated classification with bagged decision trees.
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Classification error against the number of words.
    Curve {
        #[command(flatten)]
        common: Common,
        /// Characteristics with a curve of their own.
        #[arg(long, value_delimiter = ',', default_value = "str,C_w")]
        characteristics: Vec<Characteristic>,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Local features with and without punctuation.
    Ablate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Path-length ratio of the most frequent words' subnetwork.
    PathRatio {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        top_m: usize,
    },
    /// Two-author classification error against the time between authors.
    TimePairs {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        top_n: usize,
    },
    /// Write a synthetic corpus as texts plus a manifest.
    Synth {
        #[arg(long, default_value = "synthetic")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        authors: Option<usize>,
        #[arg(long)]
        docs_per_author: Option<usize>,
        #[arg(long)]
        tokens: Option<usize>,
    },
    /// Run an experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the output directory of the file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Corpus manifest (tab-separated: id, author, language, year, path).
    #[arg(long, conflicts_with = "synthetic")]
    manifest: Option<PathBuf>,
    /// Use the built-in synthetic corpus instead of a manifest.
    #[arg(long)]
    synthetic: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Repetitions of the cross-validation.
    #[arg(long)]
    reps: Option<usize>,
    /// Trees per bagged ensemble.
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    train_per_class: Option<usize>,
    /// Shuffled networks per normalization.
    #[arg(long)]
    k_shuffles: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Fewer repetitions and no weighted global path length.
    #[arg(long)]
    budget: bool,
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, value_enum, default_value = "local")]
    mode: Mode,
    /// Comma-separated characteristics (deg, str, C_u, C_w, l_u, l_w, r_u, r_w, Q_u, Q_w).
    #[arg(long, value_delimiter = ',')]
    characteristics: Vec<Characteristic>,
    /// Number of most frequent words in local mode.
    #[arg(long, default_value_t = 12)]
    top_n: usize,
    /// Leave punctuation out of the word list.
    #[arg(long)]
    no_punctuation: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Global,
    Local,
}

impl SpecArgs {
    fn spec(&self) -> FeatureSpec {
        let spec = match self.mode {
            Mode::Global if self.characteristics.is_empty() => FeatureSpec::global(&Characteristic::GLOBAL_UNWEIGHTED),
            Mode::Global => FeatureSpec::global(&self.characteristics),
            Mode::Local if self.characteristics.is_empty() => FeatureSpec {
                top_n: self.top_n,
                ..FeatureSpec::default()
            },
            Mode::Local => FeatureSpec::local(&self.characteristics, self.top_n),
        };
        if self.no_punctuation {
            spec.without_punctuation()
        } else {
            spec
        }
    }
}

impl Common {
    fn config(&self, experiment: ExperimentKind) -> ExperimentConfig {
        let mut c = ExperimentConfig {
            experiment,
            manifest: self.manifest.clone(),
            synthetic: self.synthetic.then(SynthConfig::default),
            seed: self.seed,
            out: self.out.clone(),
            budget: self.budget,
            ..ExperimentConfig::default()
        };
        if let Some(r) = self.reps {
            c.cv.reps = r;
        }
        if let Some(t) = self.trees {
            c.cv.trees = t;
        }
        if let Some(t) = self.train_per_class {
            c.cv.train_per_class = t;
        }
        if let Some(k) = self.k_shuffles {
            c.normalization.k = k;
        }
        c
    }
}

/// Config for the single-step commands, which reuse the experiment
/// machinery with an explicit feature spec.
fn with_spec(common: &Common, spec: &SpecArgs) -> Result<ExperimentConfig> {
    let kind = match spec.mode {
        Mode::Global => ExperimentKind::GlobalUnweighted,
        Mode::Local => ExperimentKind::LocalSingleChar,
    };
    let mut c = common.config(kind).resolved()?;
    c.features = spec.spec();
    if c.budget {
        c.features
            .characteristics
            .retain(|&ch| ch != Characteristic::PathWeighted);
    }
    c.features.validate()?;
    Ok(c)
}

fn ingest(common: &Common) -> Result<()> {
    let config = common.config(ExperimentKind::GlobalUnweighted).resolved()?;
    let docs = experiments::load_documents(&config)?;
    let mut out = String::from("id\tauthor\tlanguage\tyear\ttokens\tdistinct\tpunctuation\n");
    for d in &docs {
        let distinct: std::collections::HashSet<&String> = d.stream.tokens.iter().collect();
        let punct = d.stream.len() - d.stream.without_punctuation().len();
        let year = d.meta.year.map(|y| y.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{year}\t{}\t{}\t{punct}",
            d.meta.id,
            d.meta.author,
            d.meta.language,
            d.stream.len(),
            distinct.len()
        );
    }
    write_file(&config.out, "ingest.tsv", &out)?;
    print!("{out}");
    Ok(())
}

fn synth(out: PathBuf, seed: u64, authors: Option<usize>, docs: Option<usize>, tokens: Option<usize>) -> Result<()> {
    let defaults = SynthConfig::default();
    let config = SynthConfig {
        authors: authors.unwrap_or(defaults.authors),
        docs_per_author: docs.unwrap_or(defaults.docs_per_author),
        tokens_per_doc: tokens.unwrap_or(defaults.tokens_per_doc),
        seed,
        ..defaults
    };
    let docs = lexnet::synth::synthetic_corpus(&config)?;
    let mut manifest = String::from("id\tauthor\tlanguage\tyear\tpath\n");
    for d in &docs {
        let file = format!("texts/{}.txt", d.meta.id);
        write_file(&out.join("texts"), &format!("{}.txt", d.meta.id), &d.stream.to_text())?;
        let year = d.meta.year.map(|y| y.to_string()).unwrap_or_default();
        let _ = writeln!(
            manifest,
            "{}\t{}\t{}\t{year}\t{file}",
            d.meta.id, d.meta.author, d.meta.language
        );
    }
    write_file(&out, "manifest.tsv", &manifest)?;
    println!("wrote {} documents to {}", docs.len(), out.display());
    Ok(())
}

fn record(config: &ExperimentConfig) -> Result<()> {
    write_file(&config.out, "run.json", &config.to_json())?;
    println!("results in {}", config.out.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Ingest(common) => ingest(&common),
        Command::Features { common, spec } => {
            let config = with_spec(&common, &spec)?;
            let docs = experiments::load_documents(&config)?;
            let features = experiments::feature_matrix(&docs, &config)?;
            write_file(&config.out, "features.tsv", &features.matrix.to_tsv())?;
            record(&config)
        }
        Command::Cluster { common, spec } => {
            let config = with_spec(&common, &spec)?;
            let docs = experiments::load_documents(&config)?;
            let features = experiments::feature_matrix(&docs, &config)?;
            let dendrogram = lexnet::learn::hierarchical_cluster(&features.matrix)?;
            write_file(&config.out, "dendrogram.nwk", &dendrogram.to_newick())?;
            write_file(&config.out, "dendrogram.tsv", &dendrogram.to_tsv())?;
            print!("{}", dendrogram.to_newick());
            record(&config)
        }
        Command::Classify { common, spec } => {
            let config = with_spec(&common, &spec)?;
            let docs = experiments::load_documents(&config)?;
            let outcome = experiments::run_classification(&docs, &config)?;
            outcome.write(&config.out)?;
            println!(
                "accuracy {:.4} (sd {:.4}, {} repetitions)",
                outcome.confusion.accuracy_mean(),
                outcome.confusion.accuracy_std(),
                outcome.confusion.accuracies().len()
            );
            record(&config)
        }
        Command::Curve {
            common,
            characteristics,
            n_max,
        } => {
            if characteristics.is_empty() {
                bail!("at least one characteristic is required");
            }
            let mut config = common.config(ExperimentKind::LocalSingleChar).resolved()?;
            config.curve.n_max = n_max;
            config.curve.characteristics = characteristics.clone();
            config.curve.combinations = if characteristics.len() > 1 {
                vec![characteristics.clone()]
            } else {
                Vec::new()
            };
            let mut series: Vec<Vec<Characteristic>> = characteristics.iter().map(|&c| vec![c]).collect();
            series.extend(config.curve.combinations.iter().cloned());
            let docs = experiments::load_documents(&config)?;
            let points = experiments::run_accuracy_curve(&docs, &config, &series, n_max)?;
            let text = experiments::curve_tsv(&points);
            write_file(&config.out, "curve.tsv", &text)?;
            print!("{text}");
            record(&config)
        }
        Command::Ablate { common, spec } => {
            let mut config = common.config(ExperimentKind::PunctuationAblation);
            config.features = spec.spec();
            if config.features.mode != FeatureMode::Local {
                bail!("the ablation needs local features");
            }
            let config = config.resolved()?;
            let docs = experiments::load_documents(&config)?;
            let outcome = experiments::run_punctuation_ablation(&docs, &config)?;
            outcome.write(&config.out)?;
            println!(
                "accuracy with punctuation {:.4}, without {:.4}, delta {:+.4}",
                outcome.confusion_with.accuracy_mean(),
                outcome.confusion_without.accuracy_mean(),
                outcome.delta()
            );
            record(&config)
        }
        Command::PathRatio { common, top_m } => {
            let mut config = common.config(ExperimentKind::PathRatio);
            config.top_m = top_m;
            let config = config.resolved()?;
            let docs = experiments::load_documents(&config)?;
            let rows = experiments::run_path_ratio(&docs, &config)?;
            let text = experiments::path_ratio_tsv(&rows);
            write_file(&config.out, "path_ratio.tsv", &text)?;
            print!("{text}");
            record(&config)
        }
        Command::TimePairs { common, top_n } => {
            let mut config = common.config(ExperimentKind::PairwiseTime);
            config.features.top_n = top_n;
            let config = config.resolved()?;
            let docs = experiments::load_documents(&config)?;
            experiments::run_group(&docs, &config, &config.out)?;
            record(&config)
        }
        Command::Synth {
            out,
            seed,
            authors,
            docs_per_author,
            tokens,
        } => synth(out, seed, authors, docs_per_author, tokens),
        Command::Run { config, out, budget } => {
            let mut c = ExperimentConfig::from_toml_file(&config)?;
            if let Some(out) = out {
                c.out = out;
            }
            c.budget |= budget;
            let resolved = experiments::run(&c)?;
            println!("results in {}", resolved.out.display());
            Ok(())
        }
    }
}
