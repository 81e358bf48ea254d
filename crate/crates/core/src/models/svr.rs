//! Epsilon-insensitive support vector regression with an RBF kernel,
//! trained by sequential minimal optimization.
//!
//! The dual is minimized over paired box variables `(a_i, a*_i)` in
//! `[0, C]` under the balance constraint `sum(a - a*) = 0`. Each step
//! picks the maximal KKT-violating coordinate pair, solves the
//! two-variable subproblem analytically, and updates the cached kernel
//! expansion. Convergence is declared when no violation exceeds the
//! configured tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Dual coefficients below this magnitude are pruned from the support set.
const SUPPORT_PRUNE_EPS: f64 = 1e-12;

/// Floor for the two-variable curvature term.
const CURVATURE_FLOOR: f64 = 1e-12;

/// `exp(-gamma * ||a - b||^2)`; `gamma` is the inverse squared bandwidth
/// (`1 / sigma^2`).
pub fn rbf_kernel(a: &[f64], b: &[f64], gamma: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let sq_dist: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((-gamma * sq_dist).exp())
}

/// SVR hyperparameters and solver controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvrConfig {
    pub c_penalty: f64,
    pub epsilon_tube: f64,
    pub gamma: f64,
    /// Largest KKT violation tolerated at convergence.
    pub tolerance: f64,
    /// Hard iteration cap, counted in sweeps of `n` pair updates.
    pub max_passes: usize,
}

impl SvrConfig {
    /// Defaults: `C = 1`, `epsilon = 0.1`, `gamma = 1 / n_features`,
    /// tolerance `1e-3`, cap `10^4` sweeps.
    pub fn default_for(n_features: usize) -> SvrConfig {
        SvrConfig {
            c_penalty: 1.0,
            epsilon_tube: 0.1,
            gamma: 1.0 / n_features.max(1) as f64,
            tolerance: 1e-3,
            max_passes: 10_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.c_penalty.is_finite() || self.c_penalty <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "c_penalty must be > 0, got {}",
                self.c_penalty
            )));
        }
        if !self.epsilon_tube.is_finite() || self.epsilon_tube < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon_tube must be >= 0, got {}",
                self.epsilon_tube
            )));
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be > 0, got {}",
                self.gamma
            )));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidParameter(
                "max_passes must be >= 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// Trained SVR: retained training rows, their dual coefficients
/// `v_i = a_i - a*_i`, and the bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    pub support_coefficients: Vec<f64>,
    pub support_vectors: Matrix,
    pub bias: f64,
    pub gamma: f64,
    pub c_penalty: f64,
    pub epsilon_tube: f64,
}

impl SvrModel {
    pub fn n_features(&self) -> usize {
        self.support_vectors.cols()
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        if self.support_coefficients.is_empty() {
            return Ok(vec![self.bias; x.rows()]);
        }
        if x.cols() != self.support_vectors.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.support_vectors.cols(),
                actual: x.cols(),
            });
        }
        let mut out = Vec::with_capacity(x.rows());
        for row in x.row_iter() {
            let mut acc = self.bias;
            for (v, sv) in self.support_coefficients.iter().zip(self.support_vectors.row_iter()) {
                acc += v * rbf_kernel(row, sv, self.gamma)?;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Which side of the paired dual variables a working coordinate lives on.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Up, // a_i, pushes the fit upward
    Dn, // a*_i, pushes it downward
}

/// Fit by SMO. Errors with the worst remaining KKT violation if the
/// iteration cap (`max_passes` sweeps of `n` updates) is exhausted first.
#[allow(clippy::needless_range_loop)]
pub fn fit_svr(x: &Matrix, y: &[f64], config: &SvrConfig) -> Result<SvrModel> {
    config.validate()?;
    let n = x.rows();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "SVR needs at least 2 training rows, got {n}"
        )));
    }
    if y.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "labels contain a non-finite value".to_string(),
        ));
    }

    let c = config.c_penalty;
    let eps = config.epsilon_tube;

    // Full Gram matrix; training sets here are small panels.
    let mut gram = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let k = rbf_kernel(x.row(i), x.row(j), config.gamma)?;
            gram.set(i, j, k);
            gram.set(j, i, k);
        }
    }

    let mut alpha_up = vec![0.0_f64; n];
    let mut alpha_dn = vec![0.0_f64; n];
    // kernel_expansion[i] = sum_j (alpha_up[j] - alpha_dn[j]) K_ij
    let mut kernel_expansion = vec![0.0_f64; n];

    let max_iterations = config.max_passes.saturating_mul(n);
    let mut converged = false;
    let mut final_gap = f64::INFINITY;
    let mut up_value = f64::NEG_INFINITY;
    let mut low_value = f64::INFINITY;

    for _ in 0..=max_iterations {
        // Maximal violating pair over the 2n working coordinates.
        up_value = f64::NEG_INFINITY;
        low_value = f64::INFINITY;
        let mut up_pick: Option<(usize, Side)> = None;
        let mut low_pick: Option<(usize, Side)> = None;
        for i in 0..n {
            let e = y[i] - kernel_expansion[i];
            // "raise" candidates
            if alpha_up[i] < c && e - eps > up_value {
                up_value = e - eps;
                up_pick = Some((i, Side::Up));
            }
            if alpha_dn[i] > 0.0 && e + eps > up_value {
                up_value = e + eps;
                up_pick = Some((i, Side::Dn));
            }
            // "lower" candidates
            if alpha_dn[i] < c && e + eps < low_value {
                low_value = e + eps;
                low_pick = Some((i, Side::Dn));
            }
            if alpha_up[i] > 0.0 && e - eps < low_value {
                low_value = e - eps;
                low_pick = Some((i, Side::Up));
            }
        }

        final_gap = up_value - low_value;
        if final_gap <= config.tolerance {
            converged = true;
            break;
        }
        let (s_idx, s_side) = up_pick.expect("violating pair exists when gap > tol");
        let (t_idx, t_side) = low_pick.expect("violating pair exists when gap > tol");

        let curvature = (gram.get(s_idx, s_idx) + gram.get(t_idx, t_idx)
            - 2.0 * gram.get(s_idx, t_idx))
        .max(CURVATURE_FLOOR);
        let unconstrained = final_gap / curvature;
        let cap_s = match s_side {
            Side::Up => c - alpha_up[s_idx],
            Side::Dn => alpha_dn[s_idx],
        };
        let cap_t = match t_side {
            Side::Up => alpha_up[t_idx],
            Side::Dn => c - alpha_dn[t_idx],
        };
        let step = unconstrained.min(cap_s).min(cap_t);

        // Apply, snapping to the box exactly when a bound is hit.
        match s_side {
            Side::Up => {
                alpha_up[s_idx] = if step == cap_s { c } else { alpha_up[s_idx] + step }
            }
            Side::Dn => {
                alpha_dn[s_idx] = if step == cap_s { 0.0 } else { alpha_dn[s_idx] - step }
            }
        }
        match t_side {
            Side::Up => {
                alpha_up[t_idx] = if step == cap_t { 0.0 } else { alpha_up[t_idx] - step }
            }
            Side::Dn => {
                alpha_dn[t_idx] = if step == cap_t { c } else { alpha_dn[t_idx] + step }
            }
        }
        if s_idx != t_idx {
            for r in 0..n {
                kernel_expansion[r] += step * (gram.get(r, s_idx) - gram.get(r, t_idx));
            }
        }
    }

    if !converged {
        return Err(Error::NonConvergence {
            violation: final_gap,
        });
    }

    // Bias from free (strictly interior) coordinates; midpoint of the
    // optimality band otherwise.
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for i in 0..n {
        let e = y[i] - kernel_expansion[i];
        if alpha_up[i] > 0.0 && alpha_up[i] < c {
            free_sum += e - eps;
            free_count += 1;
        }
        if alpha_dn[i] > 0.0 && alpha_dn[i] < c {
            free_sum += e + eps;
            free_count += 1;
        }
    }
    let bias = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (up_value + low_value) / 2.0
    };

    let mut support_rows = Vec::new();
    let mut support_coefficients = Vec::new();
    for i in 0..n {
        let v = alpha_up[i] - alpha_dn[i];
        if v.abs() >= SUPPORT_PRUNE_EPS {
            support_rows.push(i);
            support_coefficients.push(v);
        }
    }

    Ok(SvrModel {
        support_coefficients,
        support_vectors: x.select_rows(&support_rows),
        bias,
        gamma: config.gamma,
        c_penalty: c,
        epsilon_tube: eps,
    })
}
