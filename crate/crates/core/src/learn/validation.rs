//! Repeated stratified random sub-sampling validation.
//!
//! Each repetition draws exactly `train_per_class` training rows from every
//! class, trains a bagged ensemble, and classifies the remaining rows.
//! Splits depend only on the seed, the repetition and the row labels, so
//! two feature matrices over the same documents share every split.

use std::sync::Arc;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::numeric;
use crate::seed;

use super::{train_bagging, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CvConfig {
    pub train_per_class: usize,
    pub reps: usize,
    pub trees: usize,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            train_per_class: 4,
            reps: 2000,
            trees: 100,
            seed: 0,
        }
    }
}

/// Accumulated classification outcomes. Rows are true classes, columns
/// predicted classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    classes: Vec<String>,
    counts: Vec<Vec<u64>>,
    accuracies: Vec<f64>,
}

impl ConfusionMatrix {
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    /// Accuracy of each repetition.
    pub fn accuracies(&self) -> &[f64] {
        &self.accuracies
    }

    /// Row-normalized counts: entry `(i, j)` estimates the probability that
    /// a text of class `i` is classified as class `j`.
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let total: u64 = row.iter().sum();
                row.iter()
                    .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
                    .collect()
            })
            .collect()
    }

    pub fn accuracy_mean(&self) -> f64 {
        numeric::mean(&self.accuracies).unwrap_or(0.0)
    }

    /// Sample standard deviation of per-repetition accuracy.
    pub fn accuracy_std(&self) -> f64 {
        numeric::sample_std(&self.accuracies)
    }

    /// Standard error of the mean accuracy.
    pub fn accuracy_sem(&self) -> f64 {
        if self.accuracies.is_empty() {
            return 0.0;
        }
        self.accuracy_std() / (self.accuracies.len() as f64).sqrt()
    }

    pub fn error_mean(&self) -> f64 {
        1.0 - self.accuracy_mean()
    }

    /// Probability table: header of predicted classes, one row per true class.
    pub fn to_tsv(&self) -> String {
        self.table(|i| self.probabilities()[i].iter().map(|p| format!("{p:.6}")).collect())
    }

    pub fn counts_tsv(&self) -> String {
        self.table(|i| self.counts[i].iter().map(u64::to_string).collect())
    }

    fn table(&self, row: impl Fn(usize) -> Vec<String>) -> String {
        let mut out = String::from("true\\predicted");
        for c in &self.classes {
            out.push('\t');
            out.push_str(c);
        }
        out.push('\n');
        for (i, c) in self.classes.iter().enumerate() {
            out.push_str(c);
            for cell in row(i) {
                out.push('\t');
                out.push_str(&cell);
            }
            out.push('\n');
        }
        out
    }
}

/// Rows of each class, classes in sorted order.
fn rows_by_class(targets: &[usize], classes: usize) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); classes];
    for (r, &t) in targets.iter().enumerate() {
        groups[t].push(r);
    }
    groups
}

/// Training and test rows of repetition `rep`. Each class contributes
/// exactly `train_per_class` training rows; both lists are sorted.
pub fn stratified_split(
    groups: &[Vec<usize>],
    train_per_class: usize,
    seed: u64,
    rep: usize,
) -> (Vec<usize>, Vec<usize>) {
    let mut rng = seed::rng(seed::derive(seed, "split", rep as u64));
    let mut train = Vec::new();
    let mut test = Vec::new();
    for group in groups {
        let mut chosen: Vec<usize> = index::sample(&mut rng, group.len(), train_per_class).into_vec();
        chosen.sort_unstable();
        let mut next = chosen.iter().peekable();
        for (i, &r) in group.iter().enumerate() {
            if next.peek() == Some(&&i) {
                next.next();
                train.push(r);
            } else {
                test.push(r);
            }
        }
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

struct Repetition {
    counts: Vec<Vec<u64>>,
    accuracy: f64,
}

/// Repeated stratified sub-sampling validation of bagged trees on `matrix`.
/// Missing entries are imputed with training-fold column means in every
/// repetition.
pub fn monte_carlo_cv(matrix: &FeatureMatrix, config: &CvConfig) -> Result<ConfusionMatrix> {
    if config.reps == 0 || config.train_per_class == 0 {
        return Err(Error::InvalidSpec("reps and train_per_class must be positive".into()));
    }
    let labels = matrix.labels();
    let mut classes: Vec<String> = labels.to_vec();
    classes.sort();
    classes.dedup();
    let targets: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("label is a class"))
        .collect();
    let groups = rows_by_class(&targets, classes.len());
    for (c, g) in groups.iter().enumerate() {
        if g.len() <= config.train_per_class {
            return Err(Error::ClassTooSmall {
                class: classes[c].clone(),
                rows: g.len(),
                train_per_class: config.train_per_class,
            });
        }
    }
    let shared: Arc<[String]> = classes.iter().cloned().collect();

    let reps: Vec<Repetition> = (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let (train, test) = stratified_split(&groups, config.train_per_class, config.seed, rep);
            let means = matrix.column_means(&train);
            let dense =
                |r: usize| -> Vec<f64> { matrix.row(r).iter().zip(&means).map(|(v, m)| v.unwrap_or(*m)).collect() };
            let rows: Vec<Vec<f64>> = train.iter().map(|&r| dense(r)).collect();
            let data = Dataset::with_classes(&rows, train.iter().map(|&r| targets[r]).collect(), Arc::clone(&shared))?;
            let ensemble = train_bagging(&data, config.trees, seed::derive(config.seed, "bagging", rep as u64))?;
            let mut counts = vec![vec![0u64; classes.len()]; classes.len()];
            let mut correct = 0;
            for &r in &test {
                let predicted = ensemble.predict_index(&dense(r))?;
                counts[targets[r]][predicted] += 1;
                correct += usize::from(predicted == targets[r]);
            }
            Ok(Repetition {
                counts,
                accuracy: correct as f64 / test.len() as f64,
            })
        })
        .collect::<Result<_>>()?;

    let mut counts = vec![vec![0u64; classes.len()]; classes.len()];
    for rep in &reps {
        for (total, row) in counts.iter_mut().zip(&rep.counts) {
            for (t, c) in total.iter_mut().zip(row) {
                *t += c;
            }
        }
    }
    Ok(ConfusionMatrix {
        classes,
        counts,
        accuracies: reps.iter().map(|r| r.accuracy).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: Vec<Vec<f64>>, labels: Vec<String>) -> FeatureMatrix {
        let ids = (0..rows.len()).map(|i| format!("d{i}")).collect();
        let cols = (0..rows[0].len()).map(|c| format!("x{c}")).collect();
        FeatureMatrix::from_dense(ids, labels, cols, rows).unwrap()
    }

    #[test]
    fn split_is_stratified_and_disjoint() {
        let groups = vec![vec![0, 2, 4, 6, 8, 10], vec![1, 3, 5, 7, 9, 11]];
        let (train, test) = stratified_split(&groups, 4, 7, 3);
        assert_eq!((train.len(), test.len()), (8, 4));
        assert_eq!(train.iter().filter(|&&r| r % 2 == 0).count(), 4);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..12).collect::<Vec<_>>());
        assert_eq!(stratified_split(&groups, 4, 7, 3), (train, test));
    }

    #[test]
    fn separated_classes_are_always_right() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in 0..3 {
            for i in 0..6 {
                rows.push(vec![class as f64 * 100.0 + i as f64, (i % 2) as f64]);
                labels.push(format!("author{class}"));
            }
        }
        let config = CvConfig {
            reps: 30,
            trees: 15,
            ..CvConfig::default()
        };
        let cm = monte_carlo_cv(&matrix(rows, labels), &config).unwrap();
        assert_eq!(cm.accuracy_mean(), 1.0);
        assert_eq!(cm.accuracy_std(), 0.0);
        let p = cm.probabilities();
        for (i, row) in p.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { 1.0 } else { 0.0 });
            }
        }
        assert_eq!(cm.counts()[0][0], 60);
    }

    #[test]
    fn rows_sum_to_one_and_runs_repeat() {
        use rand::Rng;
        let mut rng = seed::rng(1);
        let rows: Vec<Vec<f64>> = (0..18).map(|_| vec![rng.gen(), rng.gen()]).collect();
        let labels: Vec<String> = (0..18).map(|i| ["a", "b", "c"][i % 3].to_string()).collect();
        let m = matrix(rows, labels);
        let config = CvConfig {
            reps: 40,
            trees: 9,
            seed: 5,
            ..CvConfig::default()
        };
        let cm = monte_carlo_cv(&m, &config).unwrap();
        for row in cm.probabilities() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert_eq!(cm, monte_carlo_cv(&m, &config).unwrap());
        assert_eq!(cm.accuracies().len(), 40);
    }

    #[test]
    fn missing_values_are_imputed() {
        let rows = vec![
            vec![Some(0.0)],
            vec![None],
            vec![Some(0.2)],
            vec![Some(10.0)],
            vec![Some(10.5)],
            vec![None],
        ];
        let labels = ["A", "A", "A", "B", "B", "B"].map(String::from).to_vec();
        let m = FeatureMatrix::new((0..6).map(|i| i.to_string()).collect(), labels, vec!["x".into()], rows).unwrap();
        let config = CvConfig {
            train_per_class: 2,
            reps: 10,
            trees: 5,
            seed: 0,
        };
        let cm = monte_carlo_cv(&m, &config).unwrap();
        assert_eq!(cm.accuracies().len(), 10);
    }

    #[test]
    fn small_class_is_named() {
        let rows = vec![vec![0.0]; 7];
        let labels = ["A", "A", "A", "A", "A", "B", "B"].map(String::from).to_vec();
        match monte_carlo_cv(&matrix(rows, labels), &CvConfig::default()) {
            Err(Error::ClassTooSmall { class, rows: 2, .. }) => assert_eq!(class, "B"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
