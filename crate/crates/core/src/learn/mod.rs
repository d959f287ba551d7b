//! Hierarchical clustering, entropy decision trees, bagged ensembles and
//! repeated stratified sub-sampling validation.

pub mod cluster;
pub mod ensemble;
pub mod tree;
pub mod validation;

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use cluster::{complete_linkage, hierarchical_cluster, Dendrogram, Merge};
pub use ensemble::{train_bagging, Ensemble};
pub use tree::{train_tree, Node, Tree};
pub use validation::{monte_carlo_cv, stratified_split, ConfusionMatrix, CvConfig};

/// Dense labeled rows. Classes are kept sorted, so a lower class index is
/// also the lexicographically smaller label; every tie-break relies on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dims: usize,
    values: Vec<f64>,
    targets: Vec<usize>,
    classes: Arc<[String]>,
}

impl Dataset {
    pub fn new<S: AsRef<str>>(rows: &[Vec<f64>], labels: &[S]) -> Result<Self> {
        let classes: BTreeSet<&str> = labels.iter().map(AsRef::as_ref).collect();
        let classes: Arc<[String]> = classes.into_iter().map(str::to_string).collect();
        let targets = labels
            .iter()
            .map(|l| {
                classes
                    .binary_search_by(|c| c.as_str().cmp(l.as_ref()))
                    .expect("label is a class")
            })
            .collect();
        Self::with_classes(rows, targets, classes)
    }

    /// Rows with class indices into an existing class list.
    pub fn with_classes(rows: &[Vec<f64>], targets: Vec<usize>, classes: Arc<[String]>) -> Result<Self> {
        if rows.len() != targets.len() {
            return Err(Error::Matrix(format!(
                "{} rows but {} labels",
                rows.len(),
                targets.len()
            )));
        }
        let dims = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * dims);
        for row in rows {
            if row.len() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    got: row.len(),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Matrix("training values must be finite".into()));
            }
            values.extend_from_slice(row);
        }
        if let Some(&t) = targets.iter().find(|&&t| t >= classes.len()) {
            return Err(Error::Matrix(format!("class index {t} out of range")));
        }
        Ok(Self {
            dims,
            values,
            targets,
            classes,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dims..(i + 1) * self.dims]
    }

    pub fn value(&self, i: usize, attribute: usize) -> f64 {
        self.values[i * self.dims + attribute]
    }

    pub fn target(&self, i: usize) -> usize {
        self.targets[i]
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub(crate) fn shared_classes(&self) -> Arc<[String]> {
        Arc::clone(&self.classes)
    }
}
