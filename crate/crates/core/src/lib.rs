//! Word-adjacency networks for stylometry.
//!
//! Texts become weighted networks of neighbouring words and punctuation
//! marks. Network characteristics, normalized against shuffled-text
//! baselines, serve as features for hierarchical clustering and for bagged
//! decision-tree authorship classification.

pub mod corpus;
pub mod error;
pub mod features;
pub mod learn;
pub mod metrics;
pub mod network;
pub mod numeric;
pub mod preprocess;
pub mod seed;
pub mod synth;

pub use error::{Error, Result};
