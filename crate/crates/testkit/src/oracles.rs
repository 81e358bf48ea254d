//! Definitional statistical oracles.

/// Neumaier-compensated sum: effectively extended-precision accumulation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Pearson coefficient straight from the definitional formula, with
/// compensated accumulation of every sum.
pub fn pearson_definitional(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mean_x = compensated_sum(x.iter().copied()) / n;
    let mean_y = compensated_sum(y.iter().copied()) / n;
    let sxy = compensated_sum(x.iter().zip(y).map(|(&a, &b)| (a - mean_x) * (b - mean_y)));
    let sxx = compensated_sum(x.iter().map(|&a| (a - mean_x) * (a - mean_x)));
    let syy = compensated_sum(y.iter().map(|&b| (b - mean_y) * (b - mean_y)));
    sxy / (sxx.sqrt() * syy.sqrt())
}

/// Average-tie ranks, derived independently: for each element, rank =
/// (count of strictly smaller) + (count of equal + 1) / 2, in rank units.
/// Quadratic, but only used on test-sized vectors.
pub fn rank_oracle(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let smaller = x.iter().filter(|&&w| w < v).count() as f64;
            let equal = x.iter().filter(|&&w| w == v).count() as f64;
            smaller + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Spearman coefficient: definitional Pearson over oracle ranks.
pub fn spearman_definitional(x: &[f64], y: &[f64]) -> f64 {
    pearson_definitional(&rank_oracle(x), &rank_oracle(y))
}

/// Adaptive Simpson integration.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    let mid = 0.5 * (a + b);
    let whole = simpson(f, a, b);
    let left = simpson(f, a, mid);
    let right = simpson(f, mid, b);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        adaptive_simpson(f, a, mid, tol / 2.0, depth - 1)
            + adaptive_simpson(f, mid, b, tol / 2.0, depth - 1)
    }
}

/// Standard normal CDF by quadrature of the density from 0 to z.
pub fn normal_cdf_quadrature(z: f64) -> f64 {
    let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if z == 0.0 {
        return 0.5;
    }
    let (lo, hi, sign) = if z > 0.0 { (0.0, z, 1.0) } else { (z, 0.0, -1.0) };
    0.5 + sign * adaptive_simpson(&density, lo, hi, 1e-14, 40)
}

/// Two-tailed Student-t p-value by quadrature of the unnormalized
/// density; the normalization constant cancels against the half-line
/// integral, so no gamma function is involved at all.
pub fn t_two_tailed_quadrature(t: f64, df: f64) -> f64 {
    let g = move |u: f64| (1.0 + u * u / df).powf(-(df + 1.0) / 2.0);
    // Map [cut, inf) to s in [0, 1) via u = cut + s/(1-s), du = ds/(1-s)^2.
    let tail = |cut: f64| {
        let integrand = move |s: f64| {
            let one_minus = 1.0 - s;
            g(cut + s / one_minus) / (one_minus * one_minus)
        };
        adaptive_simpson(&integrand, 0.0, 1.0 - 1e-9, 1e-14, 44)
    };
    tail(t.abs()) / tail(0.0)
}
