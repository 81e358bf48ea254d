//! Seeded random instance generators shared by the test suites.

use legpol_core::rng::stream_rng;
use legpol_core::Matrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    stream_rng(seed, "testkit")
}

/// Random vector; when `with_ties` is set the values are quantized so
/// duplicates occur regularly.
pub fn random_vector<R: Rng>(rng: &mut R, len: usize, with_ties: bool) -> Vec<f64> {
    (0..len)
        .map(|_| {
            let v: f64 = rng.gen_range(-10.0..10.0);
            if with_ties {
                (v * 4.0).round() / 4.0
            } else {
                v
            }
        })
        .collect()
}

/// Vector guaranteed non-constant (at least two distinct values).
pub fn random_varied_vector<R: Rng>(rng: &mut R, len: usize, with_ties: bool) -> Vec<f64> {
    loop {
        let v = random_vector(rng, len, with_ties);
        if v.windows(2).any(|w| w[0] != w[1]) {
            return v;
        }
    }
}

/// Random regression design with bounded, well-separated columns.
pub fn random_design<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    Matrix::from_rows(&data).unwrap()
}

/// Random SVR instance: inputs in a unit box, smooth bounded labels.
pub fn random_svr_instance<R: Rng>(
    rng: &mut R,
    points: usize,
    dims: usize,
) -> (Matrix, Vec<f64>) {
    let x = {
        let data: Vec<Vec<f64>> = (0..points)
            .map(|_| (0..dims).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        Matrix::from_rows(&data).unwrap()
    };
    let y: Vec<f64> = x
        .row_iter()
        .map(|row| {
            let s: f64 = row.iter().sum();
            (2.2 * s).sin() + 0.4 * s + rng.gen_range(-0.15..0.15)
        })
        .collect();
    (x, y)
}
