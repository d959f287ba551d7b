//! Agglomerative clustering with complete linkage (furthest neighbour)
//! under the Euclidean metric.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

/// One agglomeration step. Nodes `0..n` are the leaves; merge `s` creates
/// node `n + s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    /// Complete-linkage distance between the merged clusters.
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    labels: Vec<String>,
    merges: Vec<Merge>,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Merge sequence for `points`. At each step the pair of clusters with the
/// smallest maximum pairwise distance is merged; ties go to the pair found
/// first when scanning cluster slots in order.
pub fn complete_linkage(points: &[Vec<f64>]) -> Result<Vec<Merge>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewRows(n));
    }
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let d = euclidean(&points[i], &points[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let mut node = (0..n).collect::<Vec<_>>();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for i in (0..n).filter(|&i| active[i]) {
            for j in (i + 1..n).filter(|&j| active[j]) {
                if dist[i * n + j] < best.0 {
                    best = (dist[i * n + j], i, j);
                }
            }
        }
        let (height, i, j) = best;
        merges.push(Merge {
            left: node[i],
            right: node[j],
            height,
            size: size[i] + size[j],
        });
        for k in (0..n).filter(|&k| active[k] && k != i && k != j) {
            let d = dist[i * n + k].max(dist[j * n + k]);
            dist[i * n + k] = d;
            dist[k * n + i] = d;
        }
        active[j] = false;
        node[i] = n + step;
        size[i] += size[j];
    }
    Ok(merges)
}

/// Clusters the rows of `matrix`, labelling leaves by document id. Missing
/// entries are replaced by their column mean.
pub fn hierarchical_cluster(matrix: &FeatureMatrix) -> Result<Dendrogram> {
    let merges = complete_linkage(&matrix.imputed())?;
    Ok(Dendrogram {
        labels: matrix.ids().to_vec(),
        merges,
    })
}

impl Dendrogram {
    pub fn new(labels: Vec<String>, points: &[Vec<f64>]) -> Result<Self> {
        Ok(Self {
            merges: complete_linkage(points)?,
            labels,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    fn leaves(&self) -> usize {
        self.labels.len()
    }

    pub fn height(&self, node: usize) -> f64 {
        if node < self.leaves() {
            0.0
        } else {
            self.merges[node - self.leaves()].height
        }
    }

    fn root(&self) -> usize {
        self.leaves() + self.merges.len() - 1
    }

    /// Leaves from left to right as drawn.
    pub fn leaf_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaves());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            if id < self.leaves() {
                out.push(id);
            } else {
                let m = self.merges[id - self.leaves()];
                stack.push(m.right);
                stack.push(m.left);
            }
        }
        out
    }

    /// Newick text. Branch lengths are height differences, so every leaf
    /// sits at depth equal to the root height.
    pub fn to_newick(&self) -> String {
        fn escape(label: &str) -> String {
            label
                .chars()
                .map(|c| if "()[],:; \t\n'".contains(c) { '_' } else { c })
                .collect()
        }
        fn write(d: &Dendrogram, id: usize, out: &mut String) {
            if id < d.leaves() {
                out.push_str(&escape(&d.labels[id]));
                return;
            }
            let m = d.merges[id - d.leaves()];
            out.push('(');
            for (k, child) in [m.left, m.right].into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write(d, child, out);
                let _ = write!(out, ":{}", m.height - d.height(child));
            }
            out.push(')');
        }
        let mut out = String::new();
        write(self, self.root(), &mut out);
        out.push_str(";\n");
        out
    }

    /// One line per node: leaves first, then merges in order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("node\tkind\tlabel\tleft\tright\theight\tsize\n");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "{i}\tleaf\t{label}\t\t\t0\t1");
        }
        for (s, m) in self.merges.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\tmerge\t\t{}\t{}\t{}\t{}",
                self.leaves() + s,
                m.left,
                m.right,
                m.height,
                m.size
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn points(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn three_points_on_a_line() {
        let merges = complete_linkage(&points(&[0.0, 1.0, 10.0])).unwrap();
        assert_eq!(
            merges[0],
            Merge {
                left: 0,
                right: 1,
                height: 1.0,
                size: 2
            }
        );
        assert_eq!(
            merges[1],
            Merge {
                left: 3,
                right: 2,
                height: 10.0,
                size: 3
            }
        );
    }

    #[test]
    fn identical_rows_merge_at_zero() {
        let merges = complete_linkage(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![5.0, 5.0]]).unwrap();
        assert_eq!(merges[0].height, 0.0);
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(complete_linkage(&points(&[1.0])), Err(Error::TooFewRows(1))));
    }

    #[test]
    fn exports() {
        let d = Dendrogram::new(vec!["a".into(), "b".into(), "c d".into()], &points(&[0.0, 1.0, 10.0])).unwrap();
        assert_eq!(d.to_newick(), "((a:1,b:1):9,c_d:10);\n");
        assert_eq!(d.leaf_order(), vec![0, 1, 2]);
        let tsv = d.to_tsv();
        assert!(tsv.contains("3\tmerge\t\t0\t1\t1\t2\n"));
        assert!(tsv.contains("4\tmerge\t\t3\t2\t10\t3\n"));
    }

    proptest! {
        #[test]
        fn heights_never_decrease(
            rows in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 2..25)
        ) {
            let merges = complete_linkage(&rows).unwrap();
            prop_assert_eq!(merges.len(), rows.len() - 1);
            for w in merges.windows(2) {
                prop_assert!(w[1].height >= w[0].height);
            }
            prop_assert_eq!(merges.last().unwrap().size, rows.len());
            // The root height is the largest pairwise distance.
            let mut diameter: f64 = 0.0;
            for a in &rows {
                for b in &rows {
                    diameter = diameter.max(euclidean(a, b));
                }
            }
            prop_assert_eq!(merges.last().unwrap().height, diameter);
        }
    }
}
