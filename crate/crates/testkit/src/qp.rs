//! Dense QP oracle for the SVR dual, plus a KKT audit.
//!
//! The oracle minimizes the 2n-variable box/hyperplane QP with an
//! accelerated projected-gradient method (FISTA with adaptive restart)
//! and an exact projection onto the feasible set, sharing nothing with
//! the SMO path it is used to check.

#![allow(clippy::needless_range_loop)]

use legpol_core::models::SvrModel;
use legpol_core::Matrix;

fn gram(x: &Matrix, gamma: f64) -> Vec<Vec<f64>> {
    let n = x.rows();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let sq: f64 = x
                .row(i)
                .iter()
                .zip(x.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let v = (-gamma * sq).exp();
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    k
}

/// Canonical dual objective (minimization form) at coefficients
/// `beta_full`: `0.5 b^T K b + eps ||b||_1 - y^T b`.
pub fn svr_dual_objective(x: &Matrix, y: &[f64], epsilon: f64, gamma: f64, beta: &[f64]) -> f64 {
    let k = gram(x, gamma);
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += beta[i] * k[i][j] * beta[j];
        }
    }
    let l1: f64 = beta.iter().map(|b| b.abs()).sum();
    let lin: f64 = y.iter().zip(beta).map(|(a, b)| a * b).sum();
    0.5 * quad + epsilon * l1 - lin
}

/// Expand a model's support coefficients back onto the full training set
/// by aligning support rows with the original rows (supports preserve
/// training order).
pub fn full_coefficients(model: &SvrModel, x: &Matrix) -> Vec<f64> {
    let mut full = vec![0.0; x.rows()];
    let mut next_support = 0;
    for i in 0..x.rows() {
        if next_support < model.support_vectors.rows()
            && model.support_vectors.row(next_support) == x.row(i)
        {
            full[i] = model.support_coefficients[next_support];
            next_support += 1;
        }
    }
    assert_eq!(
        next_support,
        model.support_vectors.rows(),
        "support vectors did not align with training rows"
    );
    full
}

/// Exact projection of `v` onto `{a in [0, C]^{2n} : sum(up) = sum(dn)}`
/// by bisection on the hyperplane multiplier.
fn project(v: &[f64], n: usize, c: f64) -> Vec<f64> {
    let balance = |lambda: f64| -> f64 {
        let mut acc = 0.0;
        for (t, &vt) in v.iter().enumerate() {
            if t < n {
                acc += (vt - lambda).clamp(0.0, c);
            } else {
                acc -= (vt + lambda).clamp(0.0, c);
            }
        }
        acc
    };
    let bound = v.iter().fold(0.0_f64, |m, &e| m.max(e.abs())) + c + 1.0;
    let mut lo = -bound;
    let mut hi = bound;
    // balance() is non-increasing in lambda.
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    v.iter()
        .enumerate()
        .map(|(t, &vt)| {
            if t < n {
                (vt - lambda).clamp(0.0, c)
            } else {
                (vt + lambda).clamp(0.0, c)
            }
        })
        .collect()
}

/// Solve the SVR dual by accelerated projected gradient. Returns the
/// canonical coefficient vector `beta = up - dn`.
pub fn solve_svr_dual_qp(
    x: &Matrix,
    y: &[f64],
    c: f64,
    epsilon: f64,
    gamma: f64,
    max_iterations: usize,
) -> Vec<f64> {
    let n = y.len();
    let k = gram(x, gamma);

    // Lipschitz constant: 2 * lambda_max(K), via power iteration with a
    // safety factor.
    let mut vec_est = vec![1.0; n];
    let mut eigen = 1.0;
    for _ in 0..50 {
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[i] += k[i][j] * vec_est[j];
            }
        }
        eigen = next.iter().map(|e| e * e).sum::<f64>().sqrt();
        if eigen == 0.0 {
            eigen = 1.0;
            break;
        }
        for e in &mut next {
            *e /= eigen;
        }
        vec_est = next;
    }
    let lipschitz = 2.0 * eigen * 1.05 + 1e-9;

    let objective = |a: &[f64]| -> f64 {
        let beta: Vec<f64> = (0..n).map(|i| a[i] - a[n + i]).collect();
        let mut quad = 0.0;
        for i in 0..n {
            let mut kb = 0.0;
            for j in 0..n {
                kb += k[i][j] * beta[j];
            }
            quad += beta[i] * kb;
        }
        let tube: f64 = a.iter().sum::<f64>() * epsilon;
        let lin: f64 = (0..n).map(|i| y[i] * beta[i]).sum();
        0.5 * quad + tube - lin
    };
    let gradient = |a: &[f64]| -> Vec<f64> {
        let beta: Vec<f64> = (0..n).map(|i| a[i] - a[n + i]).collect();
        let mut kb = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                kb[i] += k[i][j] * beta[j];
            }
        }
        let mut g = vec![0.0; 2 * n];
        for i in 0..n {
            g[i] = kb[i] + epsilon - y[i];
            g[n + i] = -kb[i] + epsilon + y[i];
        }
        g
    };

    let mut current = vec![0.0; 2 * n];
    let mut momentum = current.clone();
    let mut t = 1.0_f64;
    let mut best = objective(&current);
    let mut since_improvement = 0usize;

    for _ in 0..max_iterations {
        let g = gradient(&momentum);
        let stepped: Vec<f64> = momentum
            .iter()
            .zip(&g)
            .map(|(a, gi)| a - gi / lipschitz)
            .collect();
        let next = project(&stepped, n, c);
        let f_next = objective(&next);

        if f_next > objective(&current) {
            // Adaptive restart: drop momentum.
            t = 1.0;
            momentum = current.clone();
        } else {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            momentum = next
                .iter()
                .zip(&current)
                .map(|(nx, cu)| nx + (t - 1.0) / t_next * (nx - cu))
                .collect();
            t = t_next;
            current = next;
        }

        if f_next < best - 1e-14 {
            best = f_next;
            since_improvement = 0;
        } else {
            since_improvement += 1;
            if since_improvement > 600 {
                break;
            }
        }
    }

    (0..n).map(|i| current[i] - current[n + i]).collect()
}

/// Result of auditing a fitted model against the KKT conditions.
#[derive(Debug, Default)]
pub struct KktReport {
    pub violations: Vec<String>,
}

impl KktReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audit a converged SVR model on its training data:
/// balance (`sum v = 0`), bounds (`|v| <= C`), and the tube conditions
/// tying each coefficient regime to the signed residual `E = f(x) - y`.
pub fn kkt_audit(model: &SvrModel, x: &Matrix, y: &[f64], tol: f64) -> KktReport {
    let mut report = KktReport::default();
    let v = full_coefficients(model, x);
    let c = model.c_penalty;
    let eps = model.epsilon_tube;
    let fitted = model.predict(x).expect("training rows predict");

    let balance: f64 = v.iter().sum();
    if balance.abs() > tol {
        report.violations.push(format!("sum(v) = {balance:e}"));
    }

    for i in 0..y.len() {
        let vi = v[i];
        let e = fitted[i] - y[i];
        if vi.abs() > c + tol {
            report
                .violations
                .push(format!("row {i}: |v| = {} exceeds C = {c}", vi.abs()));
            continue;
        }
        let at_upper = (vi - c).abs() <= tol;
        let at_lower = (vi + c).abs() <= tol;
        if vi.abs() <= tol && e.abs() > eps + tol {
            report
                .violations
                .push(format!("row {i}: zero coefficient but |E| = {} > eps", e.abs()));
        } else if at_upper && e > -eps + tol {
            report
                .violations
                .push(format!("row {i}: v = C but E = {e} > -eps"));
        } else if at_lower && e < eps - tol {
            report
                .violations
                .push(format!("row {i}: v = -C but E = {e} < eps"));
        } else if vi > tol && !at_upper && (e + eps).abs() > tol {
            report
                .violations
                .push(format!("row {i}: free v > 0 but E = {e} != -eps"));
        } else if vi < -tol && !at_lower && (e - eps).abs() > tol {
            report
                .violations
                .push(format!("row {i}: free v < 0 but E = {e} != eps"));
        }
    }
    report
}
