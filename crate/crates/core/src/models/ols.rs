//! Ordinary least squares via Householder QR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::stats::dist::students_t_two_tailed;

/// Fitted linear model. With an intercept the coefficient vector has one
/// extra trailing entry for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OlsModel {
    pub coefficients: Vec<f64>,
    pub intercept_included: bool,
}

impl OlsModel {
    pub fn n_features(&self) -> usize {
        if self.intercept_included {
            self.coefficients.len() - 1
        } else {
            self.coefficients.len()
        }
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                actual: x.cols(),
            });
        }
        let intercept = if self.intercept_included {
            self.coefficients[self.coefficients.len() - 1]
        } else {
            0.0
        };
        Ok(x.row_iter()
            .map(|row| {
                row.iter()
                    .zip(&self.coefficients)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    + intercept
            })
            .collect())
    }
}

/// Minimize the residual sum of squares.
///
/// Solved through a Householder QR decomposition of the design matrix; a
/// rank-deficient design is reported with the offending column indices
/// (the trailing index names the intercept column when one was requested).
pub fn fit_ols(x: &Matrix, y: &[f64], intercept: bool) -> Result<OlsModel> {
    let design = build_design(x, intercept);
    if y.len() != design.rows() {
        return Err(Error::LengthMismatch {
            left: design.rows(),
            right: y.len(),
        });
    }
    if design.rows() < design.cols() {
        return Err(Error::InvalidParameter(format!(
            "{} rows cannot determine {} coefficients",
            design.rows(),
            design.cols()
        )));
    }
    let qr = householder_qr(design, y)?;
    Ok(OlsModel {
        coefficients: qr.solve()?,
        intercept_included: intercept,
    })
}

/// Per-coefficient `(estimate, t, two-tailed p)` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientStat {
    pub coefficient: f64,
    pub standard_error: f64,
    pub t_statistic: f64,
    pub p_value: f64,
}

/// Coefficient significance for a fit WITHOUT an intercept, so the rows
/// speak about the features themselves.
///
/// `t_j = b_j / se(b_j)` with `se` from the `sigma^2 (X^T X)^-1` diagonal
/// and `sigma^2 = RSS / (m - k)`; p-values come from the Student-t CDF via
/// the regularized incomplete beta.
pub fn ols_coefficient_pvalues(x: &Matrix, y: &[f64]) -> Result<Vec<CoefficientStat>> {
    let m = x.rows();
    let k = x.cols();
    if m <= k {
        return Err(Error::InvalidParameter(format!(
            "need more rows ({m}) than columns ({k}) for residual degrees of freedom"
        )));
    }
    let model = fit_ols(x, y, false)?;
    let fitted = model.predict(x)?;
    let rss: f64 = y
        .iter()
        .zip(&fitted)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let scale: f64 = y.iter().map(|v| v * v).sum::<f64>().max(1.0);
    if rss <= 1e-12 * scale {
        return Err(Error::DegenerateFit);
    }

    let df = (m - k) as f64;
    let sigma2 = rss / df;

    // diag((X^T X)^-1) from R: (X^T X)^-1 = R^-1 R^-T, so the j-th
    // diagonal entry is the squared norm of row j of R^-1.
    let qr = householder_qr(x.clone(), y)?;
    let r_inv = qr.r_inverse()?;
    let mut stats = Vec::with_capacity(k);
    for j in 0..k {
        let diag: f64 = (j..k).map(|l| r_inv.get(j, l) * r_inv.get(j, l)).sum();
        let se = (sigma2 * diag).sqrt();
        let t = model.coefficients[j] / se;
        let p = students_t_two_tailed(t, df);
        stats.push(CoefficientStat {
            coefficient: model.coefficients[j],
            standard_error: se,
            t_statistic: t,
            p_value: p,
        });
    }
    Ok(stats)
}

fn build_design(x: &Matrix, intercept: bool) -> Matrix {
    if !intercept {
        return x.clone();
    }
    let mut design = Matrix::zeros(x.rows(), x.cols() + 1);
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            design.set(i, j, x.get(i, j));
        }
        design.set(i, x.cols(), 1.0);
    }
    design
}

/// Result of a Householder QR pass: `R` in the upper triangle of `a`, and
/// `Q^T y` accumulated alongside.
struct QrDecomposition {
    a: Matrix,
    qty: Vec<f64>,
    cols: usize,
}

fn householder_qr(mut a: Matrix, y: &[f64]) -> Result<QrDecomposition> {
    let m = a.rows();
    let k = a.cols();
    let mut qty = y.to_vec();

    for j in 0..k {
        // Householder vector for column j at rows j..m.
        let mut norm = 0.0;
        for i in j..m {
            norm += a.get(i, j) * a.get(i, j);
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue; // zero column; caught later by the diagonal check
        }
        let alpha = if a.get(j, j) >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a.get(i, j)).collect();
        v[0] -= alpha;
        let v_norm2: f64 = v.iter().map(|e| e * e).sum();
        if v_norm2 == 0.0 {
            continue;
        }

        // Apply H = I - 2 v v^T / (v^T v) to the remaining columns and y.
        for col in j..k {
            let dot: f64 = (j..m).map(|i| v[i - j] * a.get(i, col)).sum();
            let scale = 2.0 * dot / v_norm2;
            for i in j..m {
                let updated = a.get(i, col) - scale * v[i - j];
                a.set(i, col, updated);
            }
        }
        let dot: f64 = (j..m).map(|i| v[i - j] * qty[i]).sum();
        let scale = 2.0 * dot / v_norm2;
        for i in j..m {
            qty[i] -= scale * v[i - j];
        }
    }

    Ok(QrDecomposition { a, qty, cols: k })
}

impl QrDecomposition {
    fn check_rank(&self) -> Result<()> {
        let max_diag = (0..self.cols)
            .map(|j| self.a.get(j, j).abs())
            .fold(0.0_f64, f64::max);
        let tol = max_diag * 1e-10;
        let dependent: Vec<usize> = (0..self.cols)
            .filter(|&j| self.a.get(j, j).abs() <= tol)
            .collect();
        if !dependent.is_empty() {
            return Err(Error::SingularMatrix { columns: dependent });
        }
        Ok(())
    }

    /// Back-substitution for `R beta = Q^T y`.
    #[allow(clippy::needless_range_loop)]
    fn solve(&self) -> Result<Vec<f64>> {
        self.check_rank()?;
        let k = self.cols;
        let mut beta = vec![0.0; k];
        for j in (0..k).rev() {
            let mut acc = self.qty[j];
            for l in (j + 1)..k {
                acc -= self.a.get(j, l) * beta[l];
            }
            beta[j] = acc / self.a.get(j, j);
        }
        Ok(beta)
    }

    /// Upper-triangular inverse of `R`.
    #[allow(clippy::needless_range_loop)]
    fn r_inverse(&self) -> Result<Matrix> {
        self.check_rank()?;
        let k = self.cols;
        let mut inv = Matrix::zeros(k, k);
        for col in 0..k {
            // Solve R e = unit(col).
            for j in (0..=col).rev() {
                let mut acc = if j == col { 1.0 } else { 0.0 };
                for l in (j + 1)..=col {
                    acc -= self.a.get(j, l) * inv.get(l, col);
                }
                inv.set(j, col, acc / self.a.get(j, j));
            }
        }
        Ok(inv)
    }
}
