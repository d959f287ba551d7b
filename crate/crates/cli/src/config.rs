use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use lexnet::features::{Characteristic, FeatureMode, FeatureSpec, NormalizationConfig};
use lexnet::learn::CvConfig;
use lexnet::seed;
use lexnet::synth::SynthConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    GlobalUnweighted,
    GlobalWeighted,
    GlobalAll,
    LocalSingleChar,
    LocalCombo,
    PunctuationAblation,
    PathRatio,
    PairwiseTime,
}

/// Series of the accuracy-versus-n curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveConfig {
    pub n_max: usize,
    /// One curve per characteristic.
    pub characteristics: Vec<Characteristic>,
    /// One curve per combination.
    pub combinations: Vec<Vec<Characteristic>>,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self {
            n_max: 12,
            characteristics: vec![Characteristic::Strength, Characteristic::ClusteringWeighted],
            combinations: vec![vec![Characteristic::Strength, Characteristic::ClusteringWeighted]],
        }
    }
}

/// Everything a run depends on. The resolved form is written next to the
/// outputs, and running it again reproduces them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub manifest: Option<PathBuf>,
    /// Generate a synthetic corpus instead of reading a manifest.
    pub synthetic: Option<SynthConfig>,
    pub seed: u64,
    pub out: PathBuf,
    pub features: FeatureSpec,
    pub normalization: NormalizationConfig,
    pub cv: CvConfig,
    pub curve: CurveConfig,
    /// Subnetwork size of the path-length ratio analysis.
    pub top_m: usize,
    /// Cap repetitions and skip the weighted global path length.
    pub budget: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::GlobalUnweighted,
            manifest: None,
            synthetic: None,
            seed: 1,
            out: PathBuf::from("out"),
            features: FeatureSpec::default(),
            normalization: NormalizationConfig::default(),
            cv: CvConfig::default(),
            curve: CurveConfig::default(),
            top_m: 50,
            budget: false,
        }
    }
}

/// Repetition cap under `budget`.
pub const BUDGET_REPS: usize = 200;

impl ExperimentConfig {
    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config: Self = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        // Relative corpus paths are relative to the config file.
        if let (Some(m), Some(dir)) = (&config.manifest, path.parent()) {
            if m.is_relative() {
                config.manifest = Some(dir.join(m));
            }
        }
        Ok(config)
    }

    /// Fills in everything derived from the master seed and the experiment
    /// kind. Resolving twice gives the same result.
    pub fn resolved(&self) -> Result<Self> {
        use Characteristic as C;
        let mut c = self.clone();
        if c.manifest.is_none() && c.synthetic.is_none() {
            bail!("either a manifest or a synthetic corpus is required");
        }
        c.normalization.base_seed = seed::derive(c.seed, "normalization", 0);
        c.cv.seed = seed::derive(c.seed, "cv", 0);
        if c.budget {
            c.cv.reps = c.cv.reps.min(BUDGET_REPS);
        }
        let global = match c.experiment {
            ExperimentKind::GlobalUnweighted => Some(C::GLOBAL_UNWEIGHTED.to_vec()),
            ExperimentKind::GlobalWeighted => Some(C::GLOBAL_WEIGHTED.to_vec()),
            ExperimentKind::GlobalAll => Some([C::GLOBAL_UNWEIGHTED, C::GLOBAL_WEIGHTED].concat()),
            _ => None,
        };
        if let Some(mut chars) = global {
            if c.budget {
                chars.retain(|&ch| ch != C::PathWeighted);
            }
            c.features = FeatureSpec::global(&chars);
        }
        match c.experiment {
            ExperimentKind::PairwiseTime => {
                c.features = FeatureSpec::local(&[C::Strength, C::ClusteringWeighted], c.features.top_n.max(1));
            }
            ExperimentKind::LocalSingleChar | ExperimentKind::LocalCombo | ExperimentKind::PunctuationAblation
                if c.features.mode != FeatureMode::Local =>
            {
                bail!("{:?} needs a local feature spec", c.experiment);
            }
            _ => {}
        }
        c.features.validate()?;
        c.normalization.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&RunRecord { config: self }).expect("config serializes");
        text.push('\n');
        text
    }
}

#[derive(Serialize)]
struct RunRecord<'a> {
    config: &'a ExperimentConfig,
}
