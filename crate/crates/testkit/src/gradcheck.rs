//! Central finite-difference gradient checking for the MLP.

use legpol_core::models::{loss_and_gradients, MlpParams};
use legpol_core::Matrix;

/// Flatten parameters into a single coordinate vector
/// (w1 row-major, b1, w2, b2).
pub fn flatten(params: &MlpParams) -> Vec<f64> {
    let mut out = Vec::new();
    for h in 0..params.hidden_width() {
        out.extend_from_slice(params.w1.row(h));
    }
    out.extend_from_slice(&params.b1);
    out.extend_from_slice(&params.w2);
    out.push(params.b2);
    out
}

pub fn unflatten(template: &MlpParams, coords: &[f64]) -> MlpParams {
    let hidden = template.hidden_width();
    let input = template.input_dim();
    let mut params = template.clone();
    let mut cursor = 0;
    for h in 0..hidden {
        for j in 0..input {
            params.w1.set(h, j, coords[cursor]);
            cursor += 1;
        }
    }
    for h in 0..hidden {
        params.b1[h] = coords[cursor];
        cursor += 1;
    }
    for h in 0..hidden {
        params.w2[h] = coords[cursor];
        cursor += 1;
    }
    params.b2 = coords[cursor];
    params
}

/// Largest relative disagreement between analytic gradients and central
/// finite differences over every coordinate, dropout disabled.
pub fn max_gradient_relative_error(params: &MlpParams, x: &Matrix, y: &[f64], h: f64) -> f64 {
    let (_, analytic) = loss_and_gradients(params, x, y);
    let analytic_flat = flatten(&analytic);
    let base = flatten(params);

    let mut worst = 0.0_f64;
    for i in 0..base.len() {
        let mut plus = base.clone();
        plus[i] += h;
        let mut minus = base.clone();
        minus[i] -= h;
        let (loss_plus, _) = loss_and_gradients(&unflatten(params, &plus), x, y);
        let (loss_minus, _) = loss_and_gradients(&unflatten(params, &minus), x, y);
        let numeric = (loss_plus - loss_minus) / (2.0 * h);
        let denom = analytic_flat[i].abs() + numeric.abs() + 1e-8;
        worst = worst.max((analytic_flat[i] - numeric).abs() / denom);
    }
    worst
}
