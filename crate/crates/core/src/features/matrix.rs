use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Token written for a missing entry.
pub const MISSING: &str = "NA";

/// Per-document feature vectors with author labels. Entries can be missing
/// (word absent from a document, undefined normalization); missing values
/// are imputed by the consumer.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    ids: Vec<String>,
    labels: Vec<String>,
    columns: Vec<String>,
    values: Vec<Option<f64>>,
}

impl FeatureMatrix {
    /// Non-finite values are stored as missing.
    pub fn new(
        ids: Vec<String>,
        labels: Vec<String>,
        columns: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        if ids.len() != rows.len() || labels.len() != rows.len() {
            return Err(Error::Matrix(format!(
                "{} ids and {} labels for {} rows",
                ids.len(),
                labels.len(),
                rows.len()
            )));
        }
        let mut values = Vec::with_capacity(rows.len() * columns.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::Matrix(format!(
                    "row {} has {} values, expected {}",
                    ids[i],
                    row.len(),
                    columns.len()
                )));
            }
            values.extend(row.into_iter().map(|v| v.filter(|x| x.is_finite())));
        }
        if let Some(i) = labels.iter().position(|l| l.is_empty()) {
            return Err(Error::Matrix(format!("row {} has no label", ids[i])));
        }
        Ok(Self {
            ids,
            labels,
            columns,
            values,
        })
    }

    /// Matrix without missing entries.
    pub fn from_dense(
        ids: Vec<String>,
        labels: Vec<String>,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let rows = rows.into_iter().map(|r| r.into_iter().map(Some).collect()).collect();
        Self::new(ids, labels, columns, rows)
    }

    pub fn rows(&self) -> usize {
        self.ids.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn row(&self, r: usize) -> &[Option<f64>] {
        let d = self.cols();
        &self.values[r * d..(r + 1) * d]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<f64> {
        self.values[r * self.cols() + c]
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Row-major missing-value mask.
    pub fn mask(&self) -> Vec<bool> {
        self.values.iter().map(Option::is_none).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols()) {
            return Err(Error::Matrix(format!("no column {c}")));
        }
        let rows = (0..self.rows())
            .map(|r| cols.iter().map(|&c| self.get(r, c)).collect())
            .collect();
        let columns = cols.iter().map(|&c| self.columns[c].clone()).collect();
        Self::new(self.ids.clone(), self.labels.clone(), columns, rows)
    }

    /// Columns whose names satisfy `keep`, in their current order.
    pub fn select_by_name(&self, keep: impl Fn(&str) -> bool) -> Result<Self> {
        let cols: Vec<usize> = (0..self.cols()).filter(|&c| keep(&self.columns[c])).collect();
        self.select_columns(&cols)
    }

    /// Copy with the labels replaced.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        let rows = (0..self.rows()).map(|r| self.row(r).to_vec()).collect();
        Self::new(self.ids.clone(), labels, self.columns.clone(), rows)
    }

    /// Rows restricted to `rows`, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let data = rows.iter().map(|&r| self.row(r).to_vec()).collect();
        Self::new(
            rows.iter().map(|&r| self.ids[r].clone()).collect(),
            rows.iter().map(|&r| self.labels[r].clone()).collect(),
            self.columns.clone(),
            data,
        )
    }

    /// Dense copy with each missing entry replaced by the mean of its column
    /// over all rows (0 when the whole column is missing).
    pub fn imputed(&self) -> Vec<Vec<f64>> {
        let all: Vec<usize> = (0..self.rows()).collect();
        let means = self.column_means(&all);
        (0..self.rows())
            .map(|r| self.row(r).iter().zip(&means).map(|(v, m)| v.unwrap_or(*m)).collect())
            .collect()
    }

    /// Mean of each column over the given rows, skipping missing entries.
    pub fn column_means(&self, rows: &[usize]) -> Vec<f64> {
        (0..self.cols())
            .map(|c| {
                let mut sum = CompensatedSum::new();
                let mut n = 0usize;
                for &r in rows {
                    if let Some(v) = self.get(r, c) {
                        sum.add(v);
                        n += 1;
                    }
                }
                if n == 0 {
                    0.0
                } else {
                    sum.value() / n as f64
                }
            })
            .collect()
    }

    /// Tab-separated text: header `id, label, columns...`, then one line per
    /// row. Values use the shortest representation that parses back to the
    /// same number; missing entries are written as `NA`.
    pub fn to_tsv(&self) -> String {
        let mut w = csv::WriterBuilder::new().delimiter(b'\t').from_writer(Vec::new());
        let mut header = vec!["id".to_string(), "label".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for r in 0..self.rows() {
            let mut record = vec![self.ids[r].clone(), self.labels[r].clone()];
            record.extend(self.row(r).iter().map(|v| match v {
                Some(x) => format!("{x:?}"),
                None => MISSING.to_string(),
            }));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| Error::Matrix(e.to_string()))?.clone();
        if header.len() < 2 || &header[0] != "id" || &header[1] != "label" {
            return Err(Error::Matrix("header must start with id and label".into()));
        }
        let columns: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
        let (mut ids, mut labels, mut rows) = (Vec::new(), Vec::new(), Vec::new());
        for record in reader.records() {
            let record = record.map_err(|e| Error::Matrix(e.to_string()))?;
            ids.push(record[0].to_string());
            labels.push(record[1].to_string());
            let row = record
                .iter()
                .skip(2)
                .map(|field| {
                    if field == MISSING {
                        Ok(None)
                    } else {
                        field
                            .parse::<f64>()
                            .map(Some)
                            .map_err(|_| Error::Matrix(format!("bad value {field:?}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(ids, labels, columns, rows)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> FeatureMatrix {
        FeatureMatrix::new(
            vec!["d1".into(), "d2".into(), "d3".into()],
            vec!["A".into(), "A".into(), "B".into()],
            vec!["x".into(), "y".into()],
            vec![
                vec![Some(1.0), None],
                vec![Some(3.0), Some(0.1)],
                vec![Some(f64::NAN), Some(-2.5e-17)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn shape_and_mask() {
        let m = small();
        assert_eq!((m.rows(), m.cols()), (3, 2));
        assert_eq!(m.get(2, 0), None);
        assert_eq!(m.missing_count(), 2);
        assert_eq!(m.mask(), vec![false, true, false, false, true, false]);
        assert_eq!(m.column_means(&[0, 1, 2]), vec![2.0, (0.1 - 2.5e-17) / 2.0]);
        assert_eq!(m.imputed()[2][0], 2.0);
        let y = m.select_columns(&[1]).unwrap();
        assert_eq!(y.columns(), ["y"]);
        assert_eq!(y.row(1), [Some(0.1)]);
    }

    #[test]
    fn rejects_ragged_and_unlabeled_rows() {
        let ragged = FeatureMatrix::new(
            vec!["a".into()],
            vec!["A".into()],
            vec!["x".into(), "y".into()],
            vec![vec![Some(1.0)]],
        );
        assert!(matches!(ragged, Err(Error::Matrix(_))));
        let unlabeled = FeatureMatrix::new(vec!["a".into()], vec![String::new()], vec![], vec![vec![]]);
        assert!(matches!(unlabeled, Err(Error::Matrix(_))));
    }

    #[test]
    fn tsv_round_trip() {
        let m = small();
        let text = m.to_tsv();
        assert!(text.starts_with("id\tlabel\tx\ty\n"));
        assert!(text.contains("NA"));
        assert_eq!(FeatureMatrix::from_tsv(&text).unwrap(), m);
    }

    proptest! {
        #[test]
        fn tsv_is_bit_exact(values in prop::collection::vec(
            prop::option::of(any::<f64>().prop_filter("finite", |x| x.is_finite())), 12)
        ) {
            let rows: Vec<Vec<Option<f64>>> = values.chunks(3).map(|c| c.to_vec()).collect();
            let m = FeatureMatrix::new(
                (0..4).map(|i| format!("doc {i}")).collect(),
                (0..4).map(|i| format!("author\t{}", i % 2)).collect(),
                vec!["C_w[1]".into(), "str[1]".into(), "Q_u".into()],
                rows,
            ).unwrap();
            let back = FeatureMatrix::from_tsv(&m.to_tsv()).unwrap();
            for r in 0..4 {
                for c in 0..3 {
                    prop_assert_eq!(back.get(r, c).map(f64::to_bits), m.get(r, c).map(f64::to_bits));
                }
            }
            prop_assert_eq!(back.labels(), m.labels());
        }
    }
}
