//! Normal-equations least squares, used as an oracle against the QR path.

#![allow(clippy::needless_range_loop)]

use legpol_core::Matrix;

use crate::oracles::compensated_sum;

/// Solve `X^T X b = X^T y` by Gaussian elimination with partial pivoting
/// followed by two rounds of iterative refinement with compensated
/// residuals. Independent of the Householder QR route under test.
///
/// `intercept` appends a trailing all-ones column, matching the layout of
/// the production coefficient vector.
pub fn normal_equations_ols(x: &Matrix, y: &[f64], intercept: bool) -> Vec<f64> {
    let m = x.rows();
    let k = x.cols() + usize::from(intercept);
    let column = |j: usize| -> Vec<f64> {
        if j < x.cols() {
            x.column(j)
        } else {
            vec![1.0; m]
        }
    };

    let mut gram = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for i in 0..k {
        let ci = column(i);
        for j in i..k {
            let cj = column(j);
            let g = compensated_sum(ci.iter().zip(&cj).map(|(a, b)| a * b));
            gram[i][j] = g;
            gram[j][i] = g;
        }
        rhs[i] = compensated_sum(ci.iter().zip(y).map(|(a, b)| a * b));
    }

    let mut beta = gauss_solve(&gram, &rhs);
    for _ in 0..2 {
        let residual: Vec<f64> = (0..k)
            .map(|i| {
                rhs[i]
                    - compensated_sum(
                        (0..k).map(|j| gram[i][j] * beta[j]),
                    )
            })
            .collect();
        let delta = gauss_solve(&gram, &residual);
        for (b, d) in beta.iter_mut().zip(&delta) {
            *b += d;
        }
    }
    beta
}

fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| m[p][col].abs().partial_cmp(&m[q][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let diag = m[col][col];
        assert!(diag != 0.0, "singular normal equations in oracle");
        for row in (col + 1)..n {
            let factor = m[row][col] / diag;
            for j in col..n {
                m[row][j] -= factor * m[col][j];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut out = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for j in (row + 1)..n {
            acc -= m[row][j] * out[j];
        }
        out[row] = acc / m[row][row];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_affine_coefficients() {
        let x = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0], vec![4.0]]).unwrap();
        let y: Vec<f64> = x.column(0).iter().map(|v| 2.0 * v + 1.0).collect();
        let beta = normal_equations_ols(&x, &y, true);
        assert!((beta[0] - 2.0).abs() < 1e-12);
        assert!((beta[1] - 1.0).abs() < 1e-12);
    }
}
