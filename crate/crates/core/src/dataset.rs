//! State-year panel tables: ingestion, splitting, and min-max scaling.
//!
//! A table is the `{h, s, X}` triple used by every downstream stage: two
//! optional positive label vectors (House and Senate polarization) and an
//! m-by-n feature matrix, keyed by `(state, year)` and kept sorted by
//! ascending year, then state name.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::stream_rng;

/// Column names of the two label columns, in file order.
pub const HOUSE_LABEL_COLUMN: &str = "house_polarization";
pub const SENATE_LABEL_COLUMN: &str = "senate_polarization";

/// Which regression task a label vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    House,
    Senate,
}

impl LabelKind {
    pub fn column_name(self) -> &'static str {
        match self {
            LabelKind::House => HOUSE_LABEL_COLUMN,
            LabelKind::Senate => SENATE_LABEL_COLUMN,
        }
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelKind::House => write!(f, "house"),
            LabelKind::Senate => write!(f, "senate"),
        }
    }
}

/// Identity of one panel row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowKey {
    pub state: String,
    pub year: i32,
}

impl RowKey {
    /// Table order: ascending year, then state name.
    fn sort_key(&self) -> (i32, &str) {
        (self.year, self.state.as_str())
    }
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.state, self.year)
    }
}

/// A validated, sorted state-year panel.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetTable {
    rows: Vec<RowKey>,
    feature_names: Vec<String>,
    features: Matrix,
    house_labels: Option<Vec<f64>>,
    senate_labels: Option<Vec<f64>>,
    /// True when ingestion had to re-sort the incoming rows. Provenance
    /// metadata only; not part of table identity.
    #[serde(skip)]
    resorted: bool,
}

impl PartialEq for DatasetTable {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.feature_names == other.feature_names
            && self.features == other.features
            && self.house_labels == other.house_labels
            && self.senate_labels == other.senate_labels
    }
}

impl DatasetTable {
    /// Assemble a table from parts, enforcing every invariant: matching
    /// lengths, unique keys, strictly positive labels, sorted rows.
    pub fn new(
        rows: Vec<RowKey>,
        feature_names: Vec<String>,
        features: Matrix,
        house_labels: Option<Vec<f64>>,
        senate_labels: Option<Vec<f64>>,
    ) -> Result<DatasetTable> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::EmptyTable);
        }
        if features.rows() != m {
            return Err(Error::LengthMismatch {
                left: m,
                right: features.rows(),
            });
        }
        if features.cols() != feature_names.len() {
            return Err(Error::ColumnCountMismatch {
                expected: feature_names.len(),
                actual: features.cols(),
            });
        }
        for (labels, kind) in [
            (&house_labels, LabelKind::House),
            (&senate_labels, LabelKind::Senate),
        ] {
            if let Some(values) = labels {
                if values.len() != m {
                    return Err(Error::LengthMismatch {
                        left: m,
                        right: values.len(),
                    });
                }
                for (key, &v) in rows.iter().zip(values) {
                    if !v.is_finite() || v <= 0.0 {
                        return Err(Error::NonPositiveLabel {
                            state: key.state.clone(),
                            year: key.year,
                            label: kind.column_name().to_string(),
                            value: v,
                        });
                    }
                }
            }
        }

        let mut seen = BTreeSet::new();
        for key in &rows {
            if key.state.is_empty() {
                return Err(Error::SchemaMismatch("empty state name".to_string()));
            }
            if !seen.insert((key.year, key.state.clone())) {
                return Err(Error::DuplicateKey {
                    state: key.state.clone(),
                    year: key.year,
                });
            }
        }

        // Re-sort into (year, state) order if the input was not already
        // arranged that way.
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| rows[a].sort_key().cmp(&rows[b].sort_key()));
        let resorted = order.iter().enumerate().any(|(pos, &src)| pos != src);

        let table = if resorted {
            let rows = order.iter().map(|&i| rows[i].clone()).collect();
            let features = features.select_rows(&order);
            let pick = |v: Option<Vec<f64>>| {
                v.map(|values| order.iter().map(|&i| values[i]).collect::<Vec<f64>>())
            };
            DatasetTable {
                rows,
                feature_names,
                features,
                house_labels: pick(house_labels),
                senate_labels: pick(senate_labels),
                resorted: true,
            }
        } else {
            DatasetTable {
                rows,
                feature_names,
                features,
                house_labels,
                senate_labels,
                resorted: false,
            }
        };
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[RowKey] {
        &self.rows
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self, kind: LabelKind) -> Option<&[f64]> {
        match kind {
            LabelKind::House => self.house_labels.as_deref(),
            LabelKind::Senate => self.senate_labels.as_deref(),
        }
    }

    pub fn has_labels(&self) -> bool {
        self.house_labels.is_some() && self.senate_labels.is_some()
    }

    /// Whether ingestion re-sorted the incoming rows.
    pub fn was_resorted(&self) -> bool {
        self.resorted
    }

    /// Restrict the table to the named feature columns, in the given order.
    pub fn select_features(&self, names: &[String]) -> Result<DatasetTable> {
        let mut indices = Vec::with_capacity(names.len());
        for name in names {
            let idx = self
                .feature_names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| {
                    Error::SchemaMismatch(format!("unknown feature column `{name}`"))
                })?;
            indices.push(idx);
        }
        Ok(DatasetTable {
            rows: self.rows.clone(),
            feature_names: names.to_vec(),
            features: self.features.select_columns(&indices),
            house_labels: self.house_labels.clone(),
            senate_labels: self.senate_labels.clone(),
            resorted: false,
        })
    }

    /// Serialize back to the ingestion format. Floats are written with the
    /// shortest representation that round-trips, so load → write → load is
    /// the identity.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut header = vec!["state".to_string(), "year".to_string()];
        header.extend(self.feature_names.iter().cloned());
        if self.house_labels.is_some() {
            header.push(HOUSE_LABEL_COLUMN.to_string());
        }
        if self.senate_labels.is_some() {
            header.push(SENATE_LABEL_COLUMN.to_string());
        }
        writeln!(out, "{}", header.join(","))?;
        for (i, key) in self.rows.iter().enumerate() {
            let mut cells = vec![key.state.clone(), key.year.to_string()];
            for v in self.features.row(i) {
                cells.push(format!("{v}"));
            }
            if let Some(h) = &self.house_labels {
                cells.push(format!("{}", h[i]));
            }
            if let Some(s) = &self.senate_labels {
                cells.push(format!("{}", s[i]));
            }
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Load a panel file.
///
/// The expected column layout is `state, year, <features...>` followed by
/// the two label columns when `labels_expected` is true. When
/// `expected_features` is given the header must match it exactly; when
/// absent the feature list is taken from the header.
pub fn load_table(
    path: &Path,
    expected_features: Option<&[String]>,
    labels_expected: bool,
) -> Result<DatasetTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io {
                path: path.to_path_buf(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, e.to_string()),
            },
            _ => Error::Csv {
                path: path.to_path_buf(),
                source: e,
            },
        })?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?
        .iter()
        .map(|h| h.to_string())
        .collect();

    if headers.len() < 2 || headers[0] != "state" || headers[1] != "year" {
        return Err(Error::SchemaMismatch(
            "header must start with `state, year`".to_string(),
        ));
    }

    let labels_present = headers.len() >= 4
        && headers[headers.len() - 2] == HOUSE_LABEL_COLUMN
        && headers[headers.len() - 1] == SENATE_LABEL_COLUMN;
    if labels_expected && !labels_present {
        return Err(Error::SchemaMismatch(format!(
            "expected trailing `{HOUSE_LABEL_COLUMN}, {SENATE_LABEL_COLUMN}` label columns"
        )));
    }
    if !labels_expected && labels_present {
        return Err(Error::SchemaMismatch(
            "label columns present but labels were not expected".to_string(),
        ));
    }

    let n_label_cols = if labels_present { 2 } else { 0 };
    let feature_names: Vec<String> = headers[2..headers.len() - n_label_cols].to_vec();

    if let Some(expected) = expected_features {
        if feature_names != expected {
            for name in expected {
                if !feature_names.contains(name) {
                    return Err(Error::SchemaMismatch(format!(
                        "missing feature column `{name}`"
                    )));
                }
            }
            for name in &feature_names {
                if !expected.contains(name) {
                    return Err(Error::SchemaMismatch(format!(
                        "unexpected feature column `{name}`"
                    )));
                }
            }
            return Err(Error::SchemaMismatch(
                "feature columns out of order".to_string(),
            ));
        }
    }

    let n_features = feature_names.len();
    let mut rows = Vec::new();
    let mut feature_rows: Vec<Vec<f64>> = Vec::new();
    let mut house = Vec::new();
    let mut senate = Vec::new();

    for (idx, record) in reader.records().enumerate() {
        let row_no = idx + 1; // 1-based data row
        let record = record.map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?;
        if record.len() != headers.len() {
            return Err(Error::Cell {
                row: row_no,
                column: "<record>".to_string(),
                message: format!("{} cells, expected {}", record.len(), headers.len()),
            });
        }
        let state = record[0].to_string();
        if state.is_empty() {
            return Err(Error::Cell {
                row: row_no,
                column: "state".to_string(),
                message: "empty state name".to_string(),
            });
        }
        let year: i32 = record[1].parse().map_err(|_| Error::Cell {
            row: row_no,
            column: "year".to_string(),
            message: format!("`{}` is not an integer year", &record[1]),
        })?;

        let mut cells = Vec::with_capacity(n_features);
        for (j, name) in feature_names.iter().enumerate() {
            let raw = &record[2 + j];
            let value: f64 = raw.parse().map_err(|_| Error::Cell {
                row: row_no,
                column: name.clone(),
                message: format!("`{raw}` is not numeric"),
            })?;
            if !value.is_finite() {
                return Err(Error::Cell {
                    row: row_no,
                    column: name.clone(),
                    message: format!("`{raw}` is not finite"),
                });
            }
            cells.push(value);
        }

        if labels_present {
            for (offset, (name, sink)) in [
                (HOUSE_LABEL_COLUMN, &mut house),
                (SENATE_LABEL_COLUMN, &mut senate),
            ]
            .into_iter()
            .enumerate()
            {
                let raw = &record[2 + n_features + offset];
                let value: f64 = raw.parse().map_err(|_| Error::Cell {
                    row: row_no,
                    column: name.to_string(),
                    message: format!("`{raw}` is not numeric"),
                })?;
                sink.push(value);
            }
        }

        rows.push(RowKey { state, year });
        feature_rows.push(cells);
    }

    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }

    let features = Matrix::from_rows(&feature_rows)?;
    DatasetTable::new(
        rows,
        feature_names,
        features,
        labels_present.then_some(house),
        labels_present.then_some(senate),
    )
}

/// A seeded partition of row indices into train and validation sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataSplit {
    pub train_indices: Vec<usize>,
    pub validation_indices: Vec<usize>,
    pub seed: u64,
}

/// Partition rows with a seeded Fisher-Yates shuffle.
///
/// `|train| = round(train_fraction * m)`; the same seed always yields the
/// same split. Index lists are returned sorted ascending.
pub fn split_train_validation(
    table: &DatasetTable,
    train_fraction: f64,
    seed: u64,
) -> Result<DataSplit> {
    if !train_fraction.is_finite() || train_fraction <= 0.0 || train_fraction >= 1.0 {
        return Err(Error::InvalidFraction(train_fraction));
    }
    let m = table.len();
    if m < 2 {
        return Err(Error::TableTooSmall { rows: m });
    }
    let n_train = (train_fraction * m as f64).round() as usize;
    if n_train == 0 || n_train >= m {
        return Err(Error::TableTooSmall { rows: m });
    }

    let mut indices: Vec<usize> = (0..m).collect();
    indices.shuffle(&mut stream_rng(seed, "split"));
    let mut train: Vec<usize> = indices[..n_train].to_vec();
    let mut validation: Vec<usize> = indices[n_train..].to_vec();
    train.sort_unstable();
    validation.sort_unstable();
    Ok(DataSplit {
        train_indices: train,
        validation_indices: validation,
        seed,
    })
}

/// Per-feature `(min, max)` fitted on training rows only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    feature_names: Vec<String>,
    bounds: Vec<(f64, f64)>,
}

impl ScalerParams {
    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Serialize as `{feature_name: {"min": .., "max": ..}}`.
    pub fn to_json(&self) -> String {
        let mut doc = serde_json::Map::new();
        for (name, (lo, hi)) in self.feature_names.iter().zip(&self.bounds) {
            let mut entry = serde_json::Map::new();
            entry.insert("min".to_string(), serde_json::json!(lo));
            entry.insert("max".to_string(), serde_json::json!(hi));
            doc.insert(name.clone(), serde_json::Value::Object(entry));
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(doc))
            .expect("scaler document serializes")
    }

    /// Parse the JSON document back, ordering features as in `order`.
    pub fn from_json(text: &str, order: &[String]) -> Result<ScalerParams> {
        let doc: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::ModelFormat(format!("scaler document: {e}")))?;
        let map = doc
            .as_object()
            .ok_or_else(|| Error::ModelFormat("scaler document is not an object".to_string()))?;
        let mut bounds = Vec::with_capacity(order.len());
        for name in order {
            let entry = map.get(name).ok_or_else(|| {
                Error::ModelFormat(format!("scaler document lacks feature `{name}`"))
            })?;
            let lo = entry.get("min").and_then(|v| v.as_f64());
            let hi = entry.get("max").and_then(|v| v.as_f64());
            match (lo, hi) {
                (Some(lo), Some(hi)) => bounds.push((lo, hi)),
                _ => {
                    return Err(Error::ModelFormat(format!(
                        "scaler entry for `{name}` lacks numeric min/max"
                    )))
                }
            }
        }
        Ok(ScalerParams {
            feature_names: order.to_vec(),
            bounds,
        })
    }
}

/// Fit per-feature extrema over the training rows of `split`.
pub fn fit_minmax(table: &DatasetTable, split: &DataSplit) -> Result<ScalerParams> {
    if split.train_indices.is_empty() {
        return Err(Error::InvalidParameter(
            "empty training index set".to_string(),
        ));
    }
    if let Some(&bad) = split.train_indices.iter().find(|&&i| i >= table.len()) {
        return Err(Error::InvalidParameter(format!(
            "train index {bad} out of range for {} rows",
            table.len()
        )));
    }
    let x = table.features();
    let mut bounds = Vec::with_capacity(x.cols());
    for j in 0..x.cols() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in &split.train_indices {
            let v = x.get(i, j);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        bounds.push((lo, hi));
    }
    Ok(ScalerParams {
        feature_names: table.feature_names().to_vec(),
        bounds,
    })
}

/// Map features through `x' = (x - min) / (max - min)`.
///
/// Constant training columns map to 0. Values outside the training range
/// fall outside `[0, 1]` and are deliberately not clamped.
pub fn apply_minmax(x: &Matrix, params: &ScalerParams) -> Result<Matrix> {
    if x.cols() != params.len() {
        return Err(Error::ColumnCountMismatch {
            expected: params.len(),
            actual: x.cols(),
        });
    }
    let mut out = Matrix::zeros(x.rows(), x.cols());
    for (j, &(lo, hi)) in params.bounds.iter().enumerate() {
        let span = hi - lo;
        for i in 0..x.rows() {
            let v = if span == 0.0 {
                0.0
            } else {
                (x.get(i, j) - lo) / span
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_table() -> DatasetTable {
        DatasetTable::new(
            vec![
                RowKey {
                    state: "B".into(),
                    year: 2013,
                },
                RowKey {
                    state: "A".into(),
                    year: 2013,
                },
                RowKey {
                    state: "A".into(),
                    year: 2012,
                },
            ],
            vec!["f1".into()],
            Matrix::from_rows(&[vec![2.0], vec![4.0], vec![6.0]]).unwrap(),
            Some(vec![1.0, 2.0, 3.0]),
            Some(vec![1.5, 2.5, 3.5]),
        )
        .unwrap()
    }

    #[test]
    fn rows_sort_by_year_then_state() {
        let t = small_table();
        let keys: Vec<(i32, &str)> = t.rows().iter().map(|k| (k.year, k.state.as_str())).collect();
        assert_eq!(keys, vec![(2012, "A"), (2013, "A"), (2013, "B")]);
        // Labels follow their rows through the sort.
        assert_eq!(t.labels(LabelKind::House).unwrap(), &[3.0, 2.0, 1.0]);
        assert_eq!(t.features().column(0), vec![6.0, 4.0, 2.0]);
        assert!(t.was_resorted());
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let err = DatasetTable::new(
            vec![
                RowKey {
                    state: "A".into(),
                    year: 2013,
                },
                RowKey {
                    state: "A".into(),
                    year: 2013,
                },
            ],
            vec!["f1".into()],
            Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap(),
            None,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateKey { .. }));
    }

    #[test]
    fn non_positive_labels_are_rejected() {
        let err = DatasetTable::new(
            vec![RowKey {
                state: "A".into(),
                year: 2013,
            }],
            vec!["f1".into()],
            Matrix::from_rows(&[vec![1.0]]).unwrap(),
            Some(vec![0.0]),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveLabel { .. }));
    }

    #[test]
    fn split_sizes_follow_rounding() {
        let rows: Vec<RowKey> = (0..180)
            .map(|i| RowKey {
                state: format!("S{i:03}"),
                year: 2013,
            })
            .collect();
        let features =
            Matrix::from_rows(&(0..180).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap();
        let table = DatasetTable::new(rows, vec!["f1".into()], features, None, None).unwrap();
        let split = split_train_validation(&table, 0.8, 7).unwrap();
        assert_eq!(split.train_indices.len(), 144);
        assert_eq!(split.validation_indices.len(), 36);

        // Determinism and bijection.
        let again = split_train_validation(&table, 0.8, 7).unwrap();
        assert_eq!(split, again);
        let mut all: Vec<usize> = split
            .train_indices
            .iter()
            .chain(&split.validation_indices)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..180).collect::<Vec<_>>());
    }

    #[test]
    fn split_minimal_table() {
        let table = DatasetTable::new(
            vec![
                RowKey {
                    state: "A".into(),
                    year: 2013,
                },
                RowKey {
                    state: "B".into(),
                    year: 2013,
                },
            ],
            vec!["f1".into()],
            Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap(),
            None,
            None,
        )
        .unwrap();
        let split = split_train_validation(&table, 0.5, 1).unwrap();
        assert_eq!(split.train_indices.len(), 1);
        assert_eq!(split.validation_indices.len(), 1);

        assert!(matches!(
            split_train_validation(&table, 1.0, 1),
            Err(Error::InvalidFraction(_))
        ));
    }

    #[test]
    fn minmax_fit_and_apply() {
        let t = small_table();
        let split = DataSplit {
            train_indices: vec![0, 1, 2],
            validation_indices: vec![],
            seed: 0,
        };
        let params = fit_minmax(&t, &split).unwrap();
        assert_eq!(params.bounds(), &[(2.0, 6.0)]);

        let scaled = apply_minmax(t.features(), &params).unwrap();
        // Rows sorted to (2012,A)=6, (2013,A)=4, (2013,B)=2.
        assert_eq!(scaled.column(0), vec![1.0, 0.5, 0.0]);

        // Out-of-range value is not clamped.
        let outside = Matrix::from_rows(&[vec![8.0]]).unwrap();
        assert_eq!(apply_minmax(&outside, &params).unwrap().get(0, 0), 1.5);
    }

    #[test]
    fn constant_column_scales_to_zero() {
        let t = DatasetTable::new(
            vec![
                RowKey {
                    state: "A".into(),
                    year: 2013,
                },
                RowKey {
                    state: "B".into(),
                    year: 2013,
                },
            ],
            vec!["f1".into()],
            Matrix::from_rows(&[vec![5.0], vec![5.0]]).unwrap(),
            None,
            None,
        )
        .unwrap();
        let split = DataSplit {
            train_indices: vec![0, 1],
            validation_indices: vec![],
            seed: 0,
        };
        let params = fit_minmax(&t, &split).unwrap();
        assert_eq!(params.bounds(), &[(5.0, 5.0)]);
        let scaled = apply_minmax(t.features(), &params).unwrap();
        assert_eq!(scaled.column(0), vec![0.0, 0.0]);
    }

    #[test]
    fn single_training_row_pins_extrema() {
        let t = small_table();
        let split = DataSplit {
            train_indices: vec![1],
            validation_indices: vec![0, 2],
            seed: 0,
        };
        let params = fit_minmax(&t, &split).unwrap();
        assert_eq!(params.bounds(), &[(4.0, 4.0)]);
    }

    #[test]
    fn apply_minmax_rejects_wrong_width() {
        let t = small_table();
        let split = DataSplit {
            train_indices: vec![0],
            validation_indices: vec![],
            seed: 0,
        };
        let params = fit_minmax(&t, &split).unwrap();
        let wide = Matrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert!(matches!(
            apply_minmax(&wide, &params),
            Err(Error::ColumnCountMismatch { .. })
        ));
    }

    #[test]
    fn scaler_json_round_trip() {
        let t = small_table();
        let split = DataSplit {
            train_indices: vec![0, 1, 2],
            validation_indices: vec![],
            seed: 0,
        };
        let params = fit_minmax(&t, &split).unwrap();
        let doc = params.to_json();
        let back = ScalerParams::from_json(&doc, &["f1".into()]).unwrap();
        assert_eq!(params, back);
    }
}
