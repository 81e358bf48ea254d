//! Dataset-level properties: scaling bounds, affine round trip, split
//! bijection, and serialization stability.

use legpol_core::dataset::{
    apply_minmax, fit_minmax, load_table, split_train_validation, DatasetTable, RowKey,
};
use legpol_core::Matrix;
use legpol_testkit::gen::rng;
use proptest::prelude::*;
use rand::Rng;

fn table_from_features(features: Vec<Vec<f64>>) -> DatasetTable {
    let rows: Vec<RowKey> = (0..features.len())
        .map(|i| RowKey {
            state: format!("S{i:03}"),
            year: 2013,
        })
        .collect();
    DatasetTable::new(
        rows,
        (0..features[0].len()).map(|j| format!("f{j}")).collect(),
        Matrix::from_rows(&features).unwrap(),
        None,
        None,
    )
    .unwrap()
}

#[test]
fn training_rows_scale_into_unit_interval_with_endpoints() {
    let mut rng = rng(2024);
    for _ in 0..50 {
        let rows = rng.gen_range(4..40);
        let cols = rng.gen_range(1..6);
        let features: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-100.0..100.0)).collect())
            .collect();
        let table = table_from_features(features);
        let split = split_train_validation(&table, 0.75, rng.gen()).unwrap();
        let params = fit_minmax(&table, &split).unwrap();
        let scaled = apply_minmax(table.features(), &params).unwrap();

        for j in 0..cols {
            let train_vals: Vec<f64> = split
                .train_indices
                .iter()
                .map(|&i| scaled.get(i, j))
                .collect();
            let lo = train_vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = train_vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(lo >= 0.0 && hi <= 1.0, "train column {j} in [{lo}, {hi}]");
            let (min_j, max_j) = params.bounds()[j];
            if min_j != max_j {
                // Non-constant feature: endpoints are attained exactly.
                assert_eq!(lo, 0.0);
                assert_eq!(hi, 1.0);
            }
        }

        // Inverse affine map recovers the originals to 1e-12 relative.
        for &i in &split.train_indices {
            for j in 0..cols {
                let (min_j, max_j) = params.bounds()[j];
                let recovered = scaled.get(i, j) * (max_j - min_j) + min_j;
                let original = table.features().get(i, j);
                let tol = 1e-12 * original.abs().max(1.0);
                assert!((recovered - original).abs() <= tol);
            }
        }
    }
}

proptest! {
    #[test]
    fn split_is_a_bijection_on_indices(
        m in 2usize..300,
        fraction in 0.05f64..0.95,
        seed in proptest::num::u64::ANY,
    ) {
        let features: Vec<Vec<f64>> = (0..m).map(|i| vec![i as f64]).collect();
        let table = table_from_features(features);
        let n_train = (fraction * m as f64).round() as usize;
        prop_assume!(n_train >= 1 && n_train < m);

        let split = split_train_validation(&table, fraction, seed).unwrap();
        prop_assert_eq!(split.train_indices.len(), n_train);
        let mut all: Vec<usize> = split
            .train_indices
            .iter()
            .chain(&split.validation_indices)
            .copied()
            .collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..m).collect::<Vec<_>>());
    }
}

#[test]
fn ingestion_round_trips_bit_stably() {
    let mut rng = rng(7);
    let states = ["Alpha", "Beta", "Gamma", "Delta"];
    let mut csv = String::from("state,year,f0,f1,house_polarization,senate_polarization\n");
    for year in 2013..=2016 {
        for state in states {
            csv.push_str(&format!(
                "{state},{year},{},{},{},{}\n",
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.0..100.0),
                rng.gen_range(0.1..3.0),
                rng.gen_range(0.1..3.0),
            ));
        }
    }
    let dir = tempdir();
    let path = dir.join("panel.csv");
    std::fs::write(&path, &csv).unwrap();
    let table = load_table(&path, None, true).unwrap();

    let mut buffer = Vec::new();
    table.write_csv(&mut buffer).unwrap();
    let reparsed_path = dir.join("again.csv");
    std::fs::write(&reparsed_path, &buffer).unwrap();
    let again = load_table(&reparsed_path, None, true).unwrap();
    assert_eq!(table, again);

    // And a third pass writes identical bytes.
    let mut buffer2 = Vec::new();
    again.write_csv(&mut buffer2).unwrap();
    assert_eq!(buffer, buffer2);
    std::fs::remove_dir_all(&dir).ok();
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "legpol-scaling-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
