//! Entropy-split decision trees grown to purity.
//!
//! Each split compares one attribute against a threshold placed halfway
//! between two consecutive distinct values. The chosen split minimizes the
//! size-weighted entropy of the two children; ties go to the lowest
//! attribute index, then the lowest threshold.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::Dataset;

/// Splits whose costs differ by less than this are considered tied.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Rows with `value <= threshold` go left.
    Split {
        attribute: usize,
        threshold: f64,
        /// Entropy of the node in bits.
        entropy: f64,
        /// Entropy decrease achieved by the split.
        gain: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        class: usize,
        entropy: f64,
        /// Share of each class among the training rows reaching the leaf.
        fractions: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
    dims: usize,
    classes: Arc<[String]>,
}

/// `c * log2(c)` for counts up to the sample size.
struct EntropyTable(Vec<f64>);

impl EntropyTable {
    fn new(max: usize) -> Self {
        Self(
            (0..=max)
                .map(|c| if c == 0 { 0.0 } else { c as f64 * (c as f64).log2() })
                .collect(),
        )
    }

    fn at(&self, c: usize) -> f64 {
        self.0[c]
    }

    /// `n * H` for class counts summing to `n`.
    fn scaled_entropy(&self, counts: &[usize], n: usize) -> f64 {
        self.at(n) - counts.iter().map(|&c| self.at(c)).sum::<f64>()
    }
}

struct Builder<'a> {
    data: &'a Dataset,
    table: EntropyTable,
    nodes: Vec<Node>,
    sorted: Vec<(f64, usize)>,
    left: Vec<usize>,
    right: Vec<usize>,
}

struct BestSplit {
    attribute: usize,
    threshold: f64,
    cost: f64,
}

impl Builder<'_> {
    fn counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.data.classes().len()];
        for &r in rows {
            counts[self.data.target(r)] += 1;
        }
        counts
    }

    fn build(&mut self, rows: &mut [usize]) -> usize {
        let n = rows.len();
        let counts = self.counts(rows);
        let entropy = self.table.scaled_entropy(&counts, n) / n as f64;
        let pure = counts.iter().filter(|&&c| c > 0).count() == 1;
        let split = if pure { None } else { self.best_split(rows, &counts) };
        let Some(split) = split else {
            // Pure, or every row identical: majority leaf, ties to the
            // lowest class index.
            let class = counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map_or(0, |(c, _)| c);
            self.nodes.push(Node::Leaf {
                class,
                entropy,
                fractions: counts.iter().map(|&c| c as f64 / n as f64).collect(),
            });
            return self.nodes.len() - 1;
        };

        let gain = (entropy - split.cost / n as f64).max(0.0);
        let data = self.data;
        let mut mid = 0;
        for i in 0..n {
            if data.value(rows[i], split.attribute) <= split.threshold {
                rows.swap(i, mid);
                mid += 1;
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            class: 0,
            entropy,
            fractions: Vec::new(),
        });
        let (l, r) = rows.split_at_mut(mid);
        let left = self.build(l);
        let right = self.build(r);
        self.nodes[id] = Node::Split {
            attribute: split.attribute,
            threshold: split.threshold,
            entropy,
            gain,
            left,
            right,
        };
        id
    }

    /// Lowest-cost split, where cost is `n_left * H_left + n_right * H_right`.
    /// `None` when no attribute takes two distinct values.
    fn best_split(&mut self, rows: &[usize], counts: &[usize]) -> Option<BestSplit> {
        let n = rows.len();
        let classes = counts.len();
        let mut best: Option<BestSplit> = None;
        let total_terms: f64 = counts.iter().map(|&c| self.table.at(c)).sum();
        for attribute in 0..self.data.dims() {
            self.sorted.clear();
            self.sorted.extend(
                rows.iter()
                    .map(|&r| (self.data.value(r, attribute), self.data.target(r))),
            );
            self.sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            if self.sorted[0].0 == self.sorted[n - 1].0 {
                continue;
            }
            self.left.clear();
            self.left.resize(classes, 0);
            self.right.clear();
            self.right.extend_from_slice(counts);
            // Running sums of c*log2(c) over the class counts on each side.
            let mut left_terms = 0.0;
            let mut right_terms = total_terms;
            for i in 0..n - 1 {
                let c = self.sorted[i].1;
                left_terms += self.table.at(self.left[c] + 1) - self.table.at(self.left[c]);
                self.left[c] += 1;
                right_terms += self.table.at(self.right[c] - 1) - self.table.at(self.right[c]);
                self.right[c] -= 1;
                let (lo, hi) = (self.sorted[i].0, self.sorted[i + 1].0);
                if lo == hi {
                    continue;
                }
                let nl = i + 1;
                let cost = self.table.at(nl) - left_terms + self.table.at(n - nl) - right_terms;
                if best.as_ref().is_none_or(|b| cost < b.cost - TIE_TOLERANCE) {
                    best = Some(BestSplit {
                        attribute,
                        threshold: midpoint(lo, hi),
                        cost,
                    });
                }
            }
        }
        best
    }
}

/// A threshold strictly below `hi` and not below `lo`.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m >= lo && m < hi {
        m
    } else {
        lo
    }
}

impl Tree {
    /// Grows a tree on the given rows of `data`; repeated indices count as
    /// repeated observations.
    pub fn fit(data: &Dataset, rows: &[usize]) -> Result<Tree> {
        if rows.is_empty() || data.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let mut builder = Builder {
            data,
            table: EntropyTable::new(rows.len()),
            nodes: Vec::new(),
            sorted: Vec::with_capacity(rows.len()),
            left: Vec::new(),
            right: Vec::new(),
        };
        let mut rows = rows.to_vec();
        builder.build(&mut rows);
        Ok(Tree {
            nodes: builder.nodes,
            dims: data.dims(),
            classes: data.shared_classes(),
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn depth(&self) -> usize {
        fn depth(nodes: &[Node], id: usize) -> usize {
            match &nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + depth(nodes, *left).max(depth(nodes, *right)),
            }
        }
        depth(&self.nodes, 0)
    }

    /// Class index for a row; the caller guarantees the dimension.
    pub(crate) fn classify(&self, row: &[f64]) -> usize {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf { class, .. } => return *class,
                Node::Split {
                    attribute,
                    threshold,
                    left,
                    right,
                    ..
                } => id = if row[*attribute] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn predict_index(&self, row: &[f64]) -> Result<usize> {
        if row.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: row.len(),
            });
        }
        Ok(self.classify(row))
    }

    pub fn predict(&self, row: &[f64]) -> Result<&str> {
        Ok(&self.classes[self.predict_index(row)?])
    }
}

/// Tree grown on every row of `data`.
pub fn train_tree(data: &Dataset) -> Result<Tree> {
    let rows: Vec<usize> = (0..data.len()).collect();
    Tree::fit(data, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_dim(values: &[f64], labels: &[&str]) -> Dataset {
        let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        Dataset::new(&rows, labels).unwrap()
    }

    #[test]
    fn splits_halfway_with_one_bit_of_gain() {
        let tree = train_tree(&one_dim(&[1.0, 2.0, 3.0, 4.0], &["A", "A", "B", "B"])).unwrap();
        match tree.root() {
            Node::Split {
                attribute,
                threshold,
                gain,
                entropy,
                ..
            } => {
                assert_eq!((*attribute, *threshold), (0, 2.5));
                assert!((gain - 1.0).abs() < 1e-12);
                assert!((entropy - 1.0).abs() < 1e-12);
            }
            other => panic!("expected a split, got {other:?}"),
        }
        assert_eq!(tree.nodes().len(), 3);
        assert_eq!(tree.predict(&[0.0]).unwrap(), "A");
        assert_eq!(tree.predict(&[9.0]).unwrap(), "B");
    }

    #[test]
    fn single_class_gives_a_lone_leaf() {
        let tree = train_tree(&one_dim(&[1.0, 5.0], &["A", "A"])).unwrap();
        assert_eq!(tree.nodes().len(), 1);
        assert!(matches!(tree.root(), Node::Leaf { class: 0, .. }));
    }

    #[test]
    fn conflicting_duplicates_give_smallest_label() {
        let tree = train_tree(&one_dim(&[3.0, 3.0], &["B", "A"])).unwrap();
        match tree.root() {
            Node::Leaf { class, fractions, .. } => {
                assert_eq!(tree.classes()[*class], "A");
                assert_eq!(fractions, &vec![0.5, 0.5]);
            }
            other => panic!("expected a leaf, got {other:?}"),
        }
    }

    #[test]
    fn ties_prefer_lowest_attribute_then_threshold() {
        // Both attributes separate the classes perfectly.
        let rows = vec![vec![0.0, 10.0], vec![1.0, 11.0], vec![2.0, 12.0], vec![3.0, 13.0]];
        let data = Dataset::new(&rows, &["A", "A", "B", "B"]).unwrap();
        let tree = train_tree(&data).unwrap();
        assert!(matches!(tree.root(), Node::Split { attribute: 0, .. }));
        // Thresholds 0.5 and 2.5 give the same gain on [A, B, B, A].
        let data = one_dim(&[0.0, 1.0, 2.0, 3.0], &["A", "B", "B", "A"]);
        let tree = train_tree(&data).unwrap();
        assert!(matches!(tree.root(), Node::Split { threshold, .. } if *threshold == 0.5));
    }

    #[test]
    fn xor_is_learned_through_a_zero_gain_split() {
        let rows = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let data = Dataset::new(&rows, &["A", "B", "B", "A"]).unwrap();
        let tree = train_tree(&data).unwrap();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(tree.predict_index(row).unwrap(), data.target(i));
        }
    }

    #[test]
    fn errors() {
        let data = one_dim(&[1.0], &["A"]);
        assert!(matches!(Tree::fit(&data, &[]), Err(Error::EmptyTrainingSet)));
        let tree = train_tree(&data).unwrap();
        assert!(matches!(
            tree.predict(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn adjacent_floats_split_cleanly() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let tree = train_tree(&one_dim(&[a, b], &["A", "B"])).unwrap();
        assert_eq!(tree.predict(&[a]).unwrap(), "A");
        assert_eq!(tree.predict(&[b]).unwrap(), "B");
    }

    fn labeled_rows() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<String>)> {
        (1usize..4, 1usize..30).prop_flat_map(|(dims, n)| {
            (
                prop::collection::vec(prop::collection::vec(-3i32..3, dims), n),
                prop::collection::vec(0u8..3, n),
            )
                .prop_map(|(rows, labels)| {
                    (
                        rows.into_iter()
                            .map(|r| r.into_iter().map(f64::from).collect())
                            .collect(),
                        labels.into_iter().map(|l| ((b'A' + l) as char).to_string()).collect(),
                    )
                })
        })
    }

    fn gains(tree: &Tree) -> Vec<f64> {
        tree.nodes()
            .iter()
            .filter_map(|n| match n {
                Node::Split { gain, .. } => Some(*gain),
                Node::Leaf { .. } => None,
            })
            .collect()
    }

    proptest! {
        #[test]
        fn fits_training_set_without_conflicting_duplicates((rows, mut labels) in labeled_rows()) {
            // Repeated rows take the label of their first occurrence.
            for i in 0..rows.len() {
                if let Some(j) = (0..i).find(|&j| rows[j] == rows[i]) {
                    labels[i] = labels[j].clone();
                }
            }
            let data = Dataset::new(&rows, &labels).unwrap();
            let tree = train_tree(&data).unwrap();
            for (row, label) in rows.iter().zip(&labels) {
                prop_assert_eq!(tree.predict(row).unwrap(), label.as_str());
            }
        }

        #[test]
        fn leaves_are_pure_unless_rows_coincide((rows, labels) in labeled_rows()) {
            let data = Dataset::new(&rows, &labels).unwrap();
            let tree = train_tree(&data).unwrap();
            // Group training rows by the leaf they reach.
            let mut reach: Vec<Vec<usize>> = vec![Vec::new(); tree.nodes().len()];
            for (i, row) in rows.iter().enumerate() {
                let mut id = 0;
                while let Node::Split { attribute, threshold, left, right, .. } = &tree.nodes()[id] {
                    id = if row[*attribute] <= *threshold { *left } else { *right };
                }
                reach[id].push(i);
            }
            for members in reach.iter().filter(|m| !m.is_empty()) {
                let one_class = members.iter().all(|&i| labels[i] == labels[members[0]]);
                let one_row = members.iter().all(|&i| rows[i] == rows[members[0]]);
                prop_assert!(one_class || one_row);
            }
        }

        #[test]
        fn splits_on_distinct_values_have_positive_gain(
            values in prop::collection::hash_set(-1000i32..1000, 2..40),
            labels in prop::collection::vec(0u8..3, 40),
        ) {
            let values: Vec<f64> = values.into_iter().map(f64::from).collect();
            let labels: Vec<String> = labels[..values.len()].iter().map(|l| l.to_string()).collect();
            let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v, -v]).collect();
            let tree = train_tree(&Dataset::new(&rows, &labels).unwrap()).unwrap();
            for g in gains(&tree) {
                prop_assert!(g > 0.0);
            }
        }
    }
}
