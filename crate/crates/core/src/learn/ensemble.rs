//! Bootstrap aggregation of decision trees.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

use super::{Dataset, Tree};

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    trees: Vec<Tree>,
    dims: usize,
    classes: Arc<[String]>,
}

/// Trains `n_trees` trees, each on `m` rows drawn with replacement from the
/// `m` training rows. Tree `t` draws from a stream seeded by `seed` and `t`.
pub fn train_bagging(data: &Dataset, n_trees: usize, seed: u64) -> Result<Ensemble> {
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if n_trees == 0 {
        return Err(Error::InvalidSpec("an ensemble needs at least one tree".into()));
    }
    let mut sample = vec![0; data.len()];
    let trees = (0..n_trees)
        .map(|t| {
            bootstrap(&mut sample, seed, t);
            Tree::fit(data, &sample)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        trees,
        dims: data.dims(),
        classes: data.shared_classes(),
    })
}

/// Fills `sample` with row indices drawn with replacement from
/// `0..sample.len()`.
fn bootstrap(sample: &mut [usize], seed: u64, tree: usize) {
    let m = sample.len();
    let mut rng = seed::rng(seed::derive(seed, "bootstrap", tree as u64));
    for s in sample.iter_mut() {
        *s = rng.gen_range(0..m);
    }
}

impl Ensemble {
    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    /// Vote count per class.
    pub fn votes(&self, row: &[f64]) -> Result<Vec<usize>> {
        if row.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: row.len(),
            });
        }
        let mut votes = vec![0; self.classes.len()];
        for tree in &self.trees {
            votes[tree.classify(row)] += 1;
        }
        Ok(votes)
    }

    /// Majority class index; ties go to the lexicographically smallest label.
    pub fn predict_index(&self, row: &[f64]) -> Result<usize> {
        let votes = self.votes(row)?;
        Ok(votes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map_or(0, |(c, _)| c))
    }

    pub fn predict(&self, row: &[f64]) -> Result<&str> {
        Ok(&self.classes[self.predict_index(row)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn separable() -> Dataset {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let labels: Vec<&str> = (0..20).map(|i| if i < 10 { "low" } else { "high" }).collect();
        Dataset::new(&rows, &labels).unwrap()
    }

    #[test]
    fn classifies_held_out_points_by_side() {
        let ens = train_bagging(&separable(), 25, 3).unwrap();
        assert_eq!(ens.predict(&[-5.0]).unwrap(), "low");
        assert_eq!(ens.predict(&[3.3]).unwrap(), "low");
        assert_eq!(ens.predict(&[15.7]).unwrap(), "high");
        assert_eq!(ens.predict(&[99.0]).unwrap(), "high");
    }

    #[test]
    fn single_tree_ensemble_matches_its_tree() {
        let data = separable();
        let ens = train_bagging(&data, 1, 8).unwrap();
        for x in [-1.0, 4.5, 9.5, 10.0, 30.0] {
            assert_eq!(ens.predict(&[x]).unwrap(), ens.trees()[0].predict(&[x]).unwrap());
        }
    }

    #[test]
    fn same_seed_same_trees() {
        let data = separable();
        assert_eq!(
            train_bagging(&data, 10, 5).unwrap(),
            train_bagging(&data, 10, 5).unwrap()
        );
        assert_ne!(
            train_bagging(&data, 10, 5).unwrap(),
            train_bagging(&data, 10, 6).unwrap()
        );
    }

    #[test]
    fn vote_ties_go_to_smallest_label() {
        let rows = vec![vec![0.0], vec![1.0]];
        let a = Tree::fit(&Dataset::new(&rows, &["A", "B"]).unwrap(), &[0, 0]).unwrap();
        let b = Tree::fit(&Dataset::new(&rows, &["A", "B"]).unwrap(), &[1, 1]).unwrap();
        let ens = Ensemble {
            trees: vec![b, a],
            dims: 1,
            classes: Arc::from(vec!["A".to_string(), "B".to_string()]),
        };
        assert_eq!(ens.votes(&[0.5]).unwrap(), vec![1, 1]);
        assert_eq!(ens.predict(&[0.5]).unwrap(), "A");
        assert!(ens.predict(&[0.5, 1.0]).is_err());
    }

    #[test]
    fn bootstrap_keeps_about_63_percent() {
        let mut sample = vec![0; 5000];
        for t in 0..4 {
            bootstrap(&mut sample, 1, t);
            let unique: HashSet<usize> = sample.iter().copied().collect();
            let fraction = unique.len() as f64 / sample.len() as f64;
            assert!((fraction - (1.0 - (-1.0f64).exp())).abs() < 0.015, "{fraction}");
        }
    }

    #[test]
    fn errors() {
        let data = separable();
        assert!(train_bagging(&data, 0, 1).is_err());
        let empty = Dataset::new::<&str>(&[], &[]).unwrap();
        assert!(matches!(train_bagging(&empty, 3, 1), Err(Error::EmptyTrainingSet)));
    }
}
