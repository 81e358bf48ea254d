//! Correlation measures, non-linearity flagging, feature selection, and
//! the Wilcoxon signed-rank test.
//!
//! The flagging rule marks a feature when its Spearman rank correlation
//! with the label exceeds its Pearson correlation by at least a tolerance
//! `lambda`: a large gap points at a monotone-but-nonlinear relation or at
//! outliers dragging the linear coefficient down.

pub mod dist;

use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetTable, LabelKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Tolerance used by the flagging rule when none is given.
pub const DEFAULT_LAMBDA: f64 = 0.05;

/// Correlation threshold used by feature selection when none is given.
pub const DEFAULT_SELECTION_THRESHOLD: f64 = 0.1;

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter(
            "correlation needs at least 2 observations".to_string(),
        ));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if v.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} contains a non-finite value"
            )));
        }
    }
    Ok(())
}

fn is_constant(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    if is_constant(x) {
        return Err(Error::ConstantInput { name: "x".into() });
    }
    if is_constant(y) {
        return Err(Error::ConstantInput { name: "y".into() });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Ranks 1..n with tied values receiving the mean of the ranks they span.
pub fn rank_average_ties(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // Positions i..j (0-based) share ranks i+1..=j; assign the mean.
        let avg = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        i = j;
    }
    ranks
}

/// Spearman rank correlation: Pearson of the average-tie ranks.
///
/// For tie-free data this equals the closed form
/// `1 - 6 sum(d_i^2) / (n (n^2 - 1))`.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    if is_constant(x) {
        return Err(Error::ConstantInput { name: "x".into() });
    }
    if is_constant(y) {
        return Err(Error::ConstantInput { name: "y".into() });
    }
    pearson(&rank_average_ties(x), &rank_average_ties(y))
}

/// Pearson coefficients of one feature against both labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub feature_name: String,
    pub r_house: f64,
    pub r_senate: f64,
}

/// One row of a [`FlagReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagEntry {
    pub feature_name: String,
    pub r: f64,
    pub rho: f64,
    /// `rho - r`.
    pub gap: f64,
    pub flagged: bool,
}

/// Per-feature non-linearity flags against one label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagReport {
    pub label_name: String,
    pub lambda: f64,
    pub entries: Vec<FlagEntry>,
}

impl FlagReport {
    /// Delimited rendering: `feature,r,rho,gap,flagged`.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("feature,r,rho,gap,flagged\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.feature_name, e.r, e.rho, e.gap, e.flagged
            ));
        }
        out
    }

    pub fn flagged_features(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.flagged)
            .map(|e| e.feature_name.as_str())
            .collect()
    }
}

/// Flag features whose Spearman-Pearson gap reaches `lambda`.
///
/// A feature is flagged iff `spearman(X_j, y) - pearson(X_j, y) >= lambda`
/// (boundary inclusive).
pub fn flag_nonlinear(
    x: &Matrix,
    y: &[f64],
    feature_names: &[String],
    label_name: &str,
    lambda: f64,
) -> Result<FlagReport> {
    if x.cols() != feature_names.len() {
        return Err(Error::ColumnCountMismatch {
            expected: feature_names.len(),
            actual: x.cols(),
        });
    }
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    let mut entries = Vec::with_capacity(feature_names.len());
    for (j, name) in feature_names.iter().enumerate() {
        let column = x.column(j);
        let r = pearson(&column, y).map_err(|e| e.for_feature(name))?;
        let rho = spearman(&column, y).map_err(|e| e.for_feature(name))?;
        let gap = rho - r;
        entries.push(FlagEntry {
            feature_name: name.clone(),
            r,
            rho,
            gap,
            flagged: gap >= lambda,
        });
    }
    Ok(FlagReport {
        label_name: label_name.to_string(),
        lambda,
        entries,
    })
}

/// Keep features whose strongest absolute correlation against either label
/// reaches `threshold`. One set serves both tasks.
pub fn select_features(pairs: &[CorrelationPair], threshold: f64) -> Vec<String> {
    pairs
        .iter()
        .filter(|p| p.r_house.abs().max(p.r_senate.abs()) >= threshold)
        .map(|p| p.feature_name.clone())
        .collect()
}

/// Compute `(r_house, r_senate)` for every feature of a labeled table.
pub fn correlation_pairs(table: &DatasetTable) -> Result<Vec<CorrelationPair>> {
    let house = table
        .labels(LabelKind::House)
        .ok_or_else(|| Error::MissingLabels("house".to_string()))?;
    let senate = table
        .labels(LabelKind::Senate)
        .ok_or_else(|| Error::MissingLabels("senate".to_string()))?;
    let x = table.features();
    let mut pairs = Vec::with_capacity(x.cols());
    for (j, name) in table.feature_names().iter().enumerate() {
        let column = x.column(j);
        let r_house = pearson(&column, house).map_err(|e| e.for_feature(name))?;
        let r_senate = pearson(&column, senate).map_err(|e| e.for_feature(name))?;
        pairs.push(CorrelationPair {
            feature_name: name.clone(),
            r_house,
            r_senate,
        });
    }
    Ok(pairs)
}

/// Pairwise Pearson matrix over a table's features plus one label,
/// emitted for external heat-map rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    /// Variable names; the label is last.
    pub names: Vec<String>,
    pub values: Matrix,
}

impl CorrelationMatrix {
    /// Delimited rendering with a leading name column.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("variable,");
        out.push_str(&self.names.join(","));
        out.push('\n');
        for (i, name) in self.names.iter().enumerate() {
            out.push_str(name);
            for j in 0..self.names.len() {
                out.push_str(&format!(",{}", self.values.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// Symmetric Pearson correlation matrix of all features plus the chosen
/// label, with a unit diagonal.
pub fn correlation_matrix(table: &DatasetTable, label: LabelKind) -> Result<CorrelationMatrix> {
    let y = table
        .labels(label)
        .ok_or_else(|| Error::MissingLabels(label.to_string()))?;
    if table.len() < 2 {
        return Err(Error::TableTooSmall { rows: table.len() });
    }
    let x = table.features();
    let mut columns: Vec<Vec<f64>> = (0..x.cols()).map(|j| x.column(j)).collect();
    columns.push(y.to_vec());
    let mut names: Vec<String> = table.feature_names().to_vec();
    names.push(label.column_name().to_string());

    for (name, column) in names.iter().zip(&columns) {
        if is_constant(column) {
            return Err(Error::ConstantInput { name: name.clone() });
        }
    }

    let k = columns.len();
    let mut values = Matrix::zeros(k, k);
    for i in 0..k {
        values.set(i, i, 1.0);
        for j in (i + 1)..k {
            let r = pearson(&columns[i], &columns[j])?;
            values.set(i, j, r);
            values.set(j, i, r);
        }
    }
    Ok(CorrelationMatrix { names, values })
}

/// Result of a two-tailed Wilcoxon signed-rank test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `min(W+, W-)` over the nonzero differences.
    pub w_statistic: f64,
    /// Pairs remaining after zero differences are dropped.
    pub n_effective: usize,
    pub z_score: f64,
    pub p_two_tailed: f64,
    /// Set when `n_effective < 5`; the normal approximation is unreliable
    /// for so few pairs.
    pub approx_unreliable: bool,
}

/// Two-tailed Wilcoxon signed-rank test under the normal approximation,
/// without continuity correction.
///
/// Zero differences are dropped; absolute differences are ranked with
/// average ties; `W = min(W+, W-)`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter(
            "signed-rank test needs at least one pair".to_string(),
        ));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(Error::AllZeroDifferences);
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = rank_average_ties(&abs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let n_eff = diffs.len();
    let total = n_eff as f64 * (n_eff as f64 + 1.0) / 2.0;
    let w_minus = total - w_plus;
    let w = w_plus.min(w_minus);
    let (z, p) = normal_approximation(w, n_eff);
    Ok(WilcoxonResult {
        w_statistic: w,
        n_effective: n_eff,
        z_score: z,
        p_two_tailed: p,
        approx_unreliable: n_eff < 5,
    })
}

/// Recompute `(z, p)` from a published `W` and effective pair count.
pub fn p_from_w(w: f64, n_eff: usize) -> Result<(f64, f64)> {
    if n_eff == 0 {
        return Err(Error::InvalidParameter(
            "n_eff must be at least 1".to_string(),
        ));
    }
    let max = n_eff as f64 * (n_eff as f64 + 1.0) / 2.0;
    if !(0.0..=max).contains(&w) {
        return Err(Error::StatisticOutOfRange { w, max, n_eff });
    }
    Ok(normal_approximation(w, n_eff))
}

fn normal_approximation(w: f64, n_eff: usize) -> (f64, f64) {
    let n = n_eff as f64;
    let mu = n * (n + 1.0) / 4.0;
    let sigma = (n * (n + 1.0) * (2.0 * n + 1.0) / 24.0).sqrt();
    let z = (w - mu) / sigma;
    let p = (2.0 * dist::normal_cdf(-z.abs())).min(1.0);
    (z, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_perfect_lines() {
        assert_eq!(
            pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(),
            1.0
        );
        assert_eq!(
            pearson(&[1.0, 2.0, 3.0], &[6.0, 4.0, 2.0]).unwrap(),
            -1.0
        );
    }

    #[test]
    fn pearson_hand_value() {
        // Frozen from the definitional formula.
        let r = pearson(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 4.0, 3.0, 5.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
    }

    #[test]
    fn pearson_rejects_bad_input() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            pearson(&[3.0, 3.0, 3.0], &[1.0, 2.0, 3.0]),
            Err(Error::ConstantInput { .. })
        ));
    }

    #[test]
    fn ranks_with_and_without_ties() {
        assert_eq!(rank_average_ties(&[10.0, 20.0, 30.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(rank_average_ties(&[5.0, 5.0]), vec![1.5, 1.5]);
        assert_eq!(
            rank_average_ties(&[1.0, 2.0, 2.0, 3.0]),
            vec![1.0, 2.5, 2.5, 4.0]
        );
    }

    #[test]
    fn spearman_monotone_cube() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 8.0, 27.0, 64.0];
        assert!((spearman(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        assert!(pearson(&x, &y).unwrap() < 1.0);
        let rev = [64.0, 27.0, 8.0, 1.0];
        assert!((spearman(&x, &rev).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn spearman_tied_value() {
        // rank-then-Pearson on x=(1,2,2,3), y=(1,3,2,4) gives sqrt(0.9);
        // frozen from the definitional oracle.
        let rho = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((rho - 0.9486832980505138).abs() < 1e-12);
    }

    #[test]
    fn spearman_closed_form_on_tie_free_permutation() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [3.0, 1.0, 4.0, 6.0, 2.0, 5.0];
        let rho = spearman(&x, &y).unwrap();
        let n = x.len() as f64;
        let d2: f64 = rank_average_ties(&x)
            .iter()
            .zip(rank_average_ties(&y))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let closed = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
        assert!((rho - closed).abs() < 1e-12);
    }

    #[test]
    fn flagging_affine_vs_convex() {
        let n = 10;
        let grid: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let affine: Vec<f64> = grid.iter().map(|v| 3.0 * v + 1.0).collect();
        let convex: Vec<f64> = grid.iter().map(|v| v.exp()).collect();
        let x = Matrix::from_rows(
            &grid
                .iter()
                .zip(&convex)
                .map(|(&g, &c)| vec![g, c])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let names = vec!["linear".to_string(), "convex".to_string()];
        let report = flag_nonlinear(&x, &affine, &names, "house", DEFAULT_LAMBDA).unwrap();

        // Affine feature: rho = r = 1, gap exactly 0, never flagged for
        // lambda > 0.
        assert_eq!(report.entries[0].gap, 0.0);
        assert!(!report.entries[0].flagged);

        // Convex feature: rho = 1, r frozen from the definitional oracle.
        let e = &report.entries[1];
        assert!((e.rho - 1.0).abs() < 1e-12);
        assert!((e.r - 0.7168704019730289).abs() < 1e-12);
        assert!((e.gap - 0.283129598026971).abs() < 1e-12);
        assert!(e.flagged);
    }

    #[test]
    fn flagging_boundary_is_inclusive() {
        let grid: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let x = Matrix::from_rows(&grid.iter().map(|&g| vec![g]).collect::<Vec<_>>()).unwrap();
        let report =
            flag_nonlinear(&x, &grid, &["same".to_string()], "house", 0.0).unwrap();
        // gap = 0 >= lambda = 0.
        assert!(report.entries[0].flagged);
    }

    #[test]
    fn select_features_keeps_the_published_nine() {
        // The nine (r_house, r_senate) pairs passed to the modeling stage;
        // two House coefficients sit below 0.1 but every Senate one
        // clears it.
        let published = [
            ("moved_from_abroad", 0.383, 0.463),
            ("climate_change_belief", 0.266, 0.352),
            ("mass_shootings", 0.223, 0.243),
            ("disability", -0.204, -0.244),
            ("very_religious", -0.207, -0.2111),
            ("bachelors_degree", 0.197, 0.226),
            ("non_religious", 0.177, 0.194),
            ("median_income", 0.071, 0.163),
            ("internet_subscription", 0.053, 0.105),
        ];
        let pairs: Vec<CorrelationPair> = published
            .iter()
            .map(|(name, rh, rs)| CorrelationPair {
                feature_name: name.to_string(),
                r_house: *rh,
                r_senate: *rs,
            })
            .collect();
        let kept = select_features(&pairs, DEFAULT_SELECTION_THRESHOLD);
        assert_eq!(kept.len(), 9);
        assert_eq!(select_features(&pairs, 0.0).len(), 9);

        // Negative correlations are selected through the absolute value.
        let single = [CorrelationPair {
            feature_name: "disability".into(),
            r_house: -0.204,
            r_senate: -0.244,
        }];
        assert_eq!(select_features(&single, 0.1).len(), 1);
    }

    #[test]
    fn wilcoxon_table_values() {
        let (_, p) = p_from_w(90.0, 36).unwrap();
        assert!((p - 1.34e-4).abs() < 1e-6);
        let (_, p) = p_from_w(321.0, 36).unwrap();
        assert!((p - 0.850).abs() < 1e-3);
        let (_, p) = p_from_w(29.0, 36).unwrap();
        assert!((p - 1.79e-6).abs() < 1e-8);
    }

    #[test]
    fn wilcoxon_rejects_out_of_range() {
        assert!(matches!(
            p_from_w(667.0, 36),
            Err(Error::StatisticOutOfRange { .. })
        ));
        assert!(p_from_w(666.0, 36).is_ok());
    }

    #[test]
    fn wilcoxon_degenerate_and_null_centered() {
        let a = [1.0, 2.0, 3.0];
        assert!(matches!(
            wilcoxon_signed_rank(&a, &a),
            Err(Error::AllZeroDifferences)
        ));

        // Differences +1, -2, +3, -4: |d| ranks are 1..4, W+ = 1+3 = 4,
        // W- = 2+4 = 6, W = 4. Symmetric variant with W = mu gives p = 1.
        let a = [2.0, 1.0, 4.0, 1.0];
        let b = [1.0, 3.0, 1.0, 5.0];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.w_statistic, 4.0);
        assert_eq!(r.n_effective, 4);
        assert!(r.approx_unreliable);

        // d = (+1, -2): ranks (1, 2), W+ = 1, W- = 2, W = 1; mu = 1.5.
        // Choosing d = (+1, -1) ties at W = 1.5 = mu so z = 0, p = 1.
        let a = [2.0, 1.0];
        let b = [1.0, 2.0];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.z_score, 0.0);
        assert_eq!(r.p_two_tailed, 1.0);
    }

    #[test]
    fn wilcoxon_ties_in_absolute_differences_take_average_ranks() {
        // d = (+1, -1, +2): |d| ranks are (1.5, 1.5, 3), so
        // W+ = 1.5 + 3 = 4.5 and W- = 1.5.
        let a = [2.0, 1.0, 3.0];
        let b = [1.0, 2.0, 1.0];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.w_statistic, 1.5);
        assert_eq!(r.n_effective, 3);
    }

    #[test]
    fn correlation_matrix_diag_and_symmetry() {
        use crate::dataset::{DatasetTable, RowKey};
        let rows: Vec<RowKey> = (0..6)
            .map(|i| RowKey {
                state: format!("S{i}"),
                year: 2013,
            })
            .collect();
        let x = Matrix::from_rows(&[
            vec![1.0, 5.0, 2.0],
            vec![2.0, 3.0, 4.0],
            vec![3.0, 8.0, 1.0],
            vec![4.0, 2.0, 6.0],
            vec![5.0, 9.0, 3.0],
            vec![6.0, 1.0, 5.0],
        ])
        .unwrap();
        let labels: Vec<f64> = vec![1.0, 2.0, 2.5, 3.0, 4.0, 4.5];
        let table = DatasetTable::new(
            rows,
            vec!["a".into(), "b".into(), "c".into()],
            x,
            Some(labels.clone()),
            Some(labels),
        )
        .unwrap();
        let cm = correlation_matrix(&table, LabelKind::Senate).unwrap();
        assert_eq!(cm.names.len(), 4);
        assert_eq!(cm.names[3], "senate_polarization");
        for i in 0..4 {
            assert_eq!(cm.values.get(i, i), 1.0);
            for j in 0..4 {
                assert!((cm.values.get(i, j) - cm.values.get(j, i)).abs() < 1e-15);
            }
        }
        // Entries match the pairwise definition.
        let a = table.features().column(0);
        let b = table.features().column(1);
        assert!((cm.values.get(0, 1) - pearson(&a, &b).unwrap()).abs() < 1e-15);
    }
}
