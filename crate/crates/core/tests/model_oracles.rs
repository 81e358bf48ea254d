//! The three regressors checked against independent oracles:
//! normal equations for OLS, a dense QP solve and KKT audit for SVR,
//! finite differences for the MLP, and a rerun-everything sweep for the
//! grid search.

use legpol_core::evaluation::rmse;
use legpol_core::models::{
    fit_model, fit_ols, fit_svr, grid_search, ols_coefficient_pvalues, train_mlp, MlpParams,
    SvrConfig, SvrGrid, TrainConfig,
};
use legpol_core::rng::stream_rng;
use legpol_core::Matrix;
use legpol_testkit::gen::{random_design, random_svr_instance, rng};
use legpol_testkit::{
    kkt_audit, max_gradient_relative_error, normal_equations_ols, solve_svr_dual_qp,
    svr_dual_objective, t_two_tailed_quadrature,
};
use rand::Rng;

#[test]
fn ols_matches_normal_equations_oracle() {
    // The 5-row, 2-feature hand instance.
    let x = Matrix::from_rows(&[
        vec![0.2, 1.1],
        vec![1.4, -0.3],
        vec![2.1, 0.8],
        vec![3.3, 1.9],
        vec![4.0, -1.2],
    ])
    .unwrap();
    let y = [1.0, 2.2, 3.1, 5.0, 3.3];
    let model = fit_ols(&x, &y, true).unwrap();
    let oracle = normal_equations_ols(&x, &y, true);
    for (a, b) in model.coefficients.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    // And across random instances, with the residual-orthogonality
    // invariant along the way.
    let mut rng = rng(41);
    for _ in 0..100 {
        let rows = rng.gen_range(8..40);
        let cols = rng.gen_range(1..5);
        let x = random_design(&mut rng, rows, cols);
        let y: Vec<f64> = (0..rows).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let model = fit_ols(&x, &y, true).unwrap();
        let oracle = normal_equations_ols(&x, &y, true);
        for (a, b) in model.coefficients.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        let fitted = model.predict(&x).unwrap();
        let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(t, f)| t - f).collect();
        for j in 0..cols {
            let dot: f64 = x.column(j).iter().zip(&residuals).map(|(a, r)| a * r).sum();
            assert!(dot.abs() < 1e-8);
        }
    }
}

#[test]
fn coefficient_pvalues_match_quadrature_oracle() {
    // Residual degrees of freedom 3, 10, and 30.
    let mut rng = rng(77);
    for &(rows, cols) in &[(5usize, 2usize), (13, 3), (34, 4)] {
        let x = random_design(&mut rng, rows, cols);
        let y: Vec<f64> = x
            .row_iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(j, v)| (j as f64 + 1.0) * 0.6 * v)
                    .sum::<f64>()
                    + rng.gen_range(-1.0..1.0)
            })
            .collect();
        let stats = ols_coefficient_pvalues(&x, &y).unwrap();
        let df = (rows - cols) as f64;
        for s in &stats {
            let oracle_p = t_two_tailed_quadrature(s.t_statistic, df);
            assert!(
                (s.p_value - oracle_p).abs() < 1e-8,
                "df {df}: p {} vs oracle {oracle_p}",
                s.p_value
            );
        }
    }
}

#[test]
fn smo_matches_dense_qp_oracle_on_small_instances() {
    let mut rng = rng(9001);
    for trial in 0..12 {
        let points = rng.gen_range(4..=20);
        let dims = rng.gen_range(1..=3);
        let (x, y) = random_svr_instance(&mut rng, points, dims);
        let cfg = SvrConfig {
            c_penalty: rng.gen_range(0.5..4.0),
            epsilon_tube: rng.gen_range(0.02..0.2),
            gamma: rng.gen_range(0.5..3.0),
            tolerance: 1e-9,
            max_passes: 100_000,
        };
        let model = fit_svr(&x, &y, &cfg).unwrap();
        let beta = legpol_testkit::qp::full_coefficients(&model, &x);
        let mine = svr_dual_objective(&x, &y, cfg.epsilon_tube, cfg.gamma, &beta);

        let oracle_beta = solve_svr_dual_qp(
            &x,
            &y,
            cfg.c_penalty,
            cfg.epsilon_tube,
            cfg.gamma,
            200_000,
        );
        let oracle = svr_dual_objective(&x, &y, cfg.epsilon_tube, cfg.gamma, &oracle_beta);
        assert!(
            (mine - oracle).abs() < 1e-6,
            "trial {trial}: {mine} vs oracle {oracle}"
        );

        let report = kkt_audit(&model, &x, &y, 1e-6);
        assert!(report.ok(), "trial {trial}: {:?}", report.violations);
    }
}

#[test]
fn svr_six_point_one_dimensional_instance() {
    // The 12-variable dual of the six-point line.
    let x = Matrix::from_rows(&[
        vec![0.0],
        vec![0.2],
        vec![0.4],
        vec![0.6],
        vec![0.8],
        vec![1.0],
    ])
    .unwrap();
    let y = [0.05, 0.42, 0.68, 0.64, 0.92, 1.31];
    let cfg = SvrConfig {
        c_penalty: 2.0,
        epsilon_tube: 0.1,
        gamma: 1.5,
        tolerance: 1e-9,
        max_passes: 100_000,
    };
    let model = fit_svr(&x, &y, &cfg).unwrap();
    let beta = legpol_testkit::qp::full_coefficients(&model, &x);
    let mine = svr_dual_objective(&x, &y, cfg.epsilon_tube, cfg.gamma, &beta);
    let oracle_beta = solve_svr_dual_qp(&x, &y, cfg.c_penalty, cfg.epsilon_tube, cfg.gamma, 200_000);
    let oracle = svr_dual_objective(&x, &y, cfg.epsilon_tube, cfg.gamma, &oracle_beta);
    assert!((mine - oracle).abs() < 1e-6, "{mine} vs {oracle}");

    // Predictions on the support set stay consistent with the tube.
    let report = kkt_audit(&model, &x, &y, 1e-6);
    assert!(report.ok(), "{:?}", report.violations);
}

#[test]
fn mlp_gradients_match_central_differences() {
    let mut rng = rng(5150);
    for draw in 0..8 {
        let input = rng.gen_range(2..6);
        let hidden = rng.gen_range(2..6);
        let batch = rng.gen_range(3..9);
        let mut init = stream_rng(1000 + draw, "mlp-init");
        let params = MlpParams::init(input, hidden, &mut init);
        let x = random_design(&mut rng, batch, input);
        let y: Vec<f64> = (0..batch).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let worst = max_gradient_relative_error(&params, &x, &y, 1e-5);
        assert!(worst < 1e-4, "draw {draw}: relative error {worst:e}");
    }
}

#[test]
fn grid_search_matches_rerun_oracle() {
    let mut rng = rng(31);
    let x_train = random_design(&mut rng, 28, 2);
    let y_train: Vec<f64> = x_train
        .row_iter()
        .map(|r| (1.7 * r[0]).sin() + 0.4 * r[1] + rng.gen_range(-0.1..0.1))
        .collect();
    let x_val = random_design(&mut rng, 10, 2);
    let y_val: Vec<f64> = x_val
        .row_iter()
        .map(|r| (1.7 * r[0]).sin() + 0.4 * r[1])
        .collect();

    let grid = SvrGrid {
        c: vec![0.1, 1.0, 10.0],
        epsilon: vec![0.01, 0.1],
        gamma: vec![0.1, 1.0],
    };
    let cells = grid.cells(&SvrConfig::default_for(2));
    let result = grid_search(&cells, &x_train, &y_train, &x_val, &y_val).unwrap();

    // Rerun every cell from scratch and take the argmin independently.
    let mut best = (usize::MAX, f64::INFINITY);
    for (i, cell) in cells.iter().enumerate() {
        let model = fit_model(cell, &x_train, &y_train, &x_val, &y_val).unwrap();
        let score = rmse(&y_val, &model.predict(&x_val).unwrap()).unwrap();
        if score < best.1 {
            best = (i, score);
        }
    }
    assert_eq!(result.best_index, best.0);
    assert_eq!(result.cells.len(), 12);
}

#[test]
fn mlp_best_epoch_invariant_on_real_training() {
    let mut rng = rng(88);
    let x_train = random_design(&mut rng, 60, 4);
    let y_train: Vec<f64> = x_train
        .row_iter()
        .map(|r| r.iter().sum::<f64>().tanh() + rng.gen_range(-0.05..0.05))
        .collect();
    let x_val = random_design(&mut rng, 20, 4);
    let y_val: Vec<f64> = x_val.row_iter().map(|r| r.iter().sum::<f64>().tanh()).collect();
    let cfg = TrainConfig {
        seed: 21,
        max_epochs: 80,
        batch_size: 16,
        ..TrainConfig::default()
    };
    let model = train_mlp(&x_train, &y_train, &x_val, &y_val, &cfg).unwrap();
    let min = model
        .training_history
        .iter()
        .map(|e| e.validation_rmse)
        .fold(f64::INFINITY, f64::min);
    assert!((model.best_validation_rmse() - min).abs() < 1e-12);
    assert_eq!(
        model.training_history[model.best_epoch - 1].validation_rmse,
        min
    );

    // The returned parameters really are the checkpoint: re-evaluating
    // them on the validation set reproduces the minimum.
    let preds = model.predict(&x_val).unwrap();
    let re_rmse = rmse(&y_val, &preds).unwrap();
    assert!((re_rmse - min).abs() < 1e-12);
}

#[test]
fn svr_prediction_unchanged_by_pruned_points() {
    let x = Matrix::from_rows(&(0..9).map(|i| vec![i as f64 / 8.0]).collect::<Vec<_>>()).unwrap();
    let y: Vec<f64> = x.column(0).iter().map(|v| 0.8 * v + 0.1).collect();
    let cfg = SvrConfig {
        c_penalty: 5.0,
        epsilon_tube: 0.15,
        gamma: 1.0,
        tolerance: 1e-8,
        max_passes: 50_000,
    };
    let model = fit_svr(&x, &y, &cfg).unwrap();
    assert!(model.support_vectors.rows() < x.rows(), "nothing was pruned");
    let probe = Matrix::from_rows(&[vec![0.33], vec![0.77]]).unwrap();
    let pruned = model.predict(&probe).unwrap();

    // Re-attach a pruned training point with its (zero) coefficient:
    // predictions must not move at all.
    let mut rows: Vec<Vec<f64>> = model.support_vectors.row_iter().map(|r| r.to_vec()).collect();
    let dropped = x
        .row_iter()
        .find(|row| !rows.iter().any(|kept| kept.as_slice() == *row))
        .expect("a pruned row exists");
    rows.push(dropped.to_vec());
    let mut padded = model.clone();
    padded.support_vectors = Matrix::from_rows(&rows).unwrap();
    padded.support_coefficients.push(0.0);
    assert_eq!(padded.predict(&probe).unwrap(), pruned);
}
