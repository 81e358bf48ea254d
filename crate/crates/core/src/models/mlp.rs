//! Single-hidden-layer feedforward regressor trained with Adam.
//!
//! Architecture: input -> hidden (ReLU, inverted dropout) -> scalar
//! output. Training minimizes mean squared error over shuffled
//! mini-batches; after every epoch the validation RMSE is measured in
//! inference mode and the parameter snapshot at the best epoch is what
//! the returned model carries.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::stream_rng;

/// Optimizer and schedule settings. `hidden_width` and `dropout_rate`
/// define the architecture; everything else drives Adam.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub seed: u64,
    pub max_epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_epsilon: f64,
    pub hidden_width: usize,
    pub dropout_rate: f64,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            seed: 0,
            max_epochs: 500,
            batch_size: 32,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            adam_epsilon: 1e-7,
            hidden_width: 5,
            dropout_rate: 0.2,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_epochs == 0 {
            return Err(Error::InvalidParameter("max_epochs must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("batch_size must be >= 1".into()));
        }
        // A zero learning rate is a legitimate no-op run; only negative or
        // non-finite rates are rejected.
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "learning_rate must be finite and >= 0, got {}",
                self.learning_rate
            )));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !b.is_finite() || b <= 0.0 || b >= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {b}"
                )));
            }
        }
        if !self.adam_epsilon.is_finite() || self.adam_epsilon <= 0.0 {
            return Err(Error::InvalidParameter("adam_epsilon must be > 0".into()));
        }
        if self.hidden_width == 0 {
            return Err(Error::InvalidParameter("hidden_width must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::InvalidParameter(format!(
                "dropout_rate must lie in [0, 1), got {}",
                self.dropout_rate
            )));
        }
        Ok(())
    }
}

/// Weight stacks of the network. `w1` is hidden-by-input, `w2` maps the
/// hidden layer to the scalar output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub w1: Matrix,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl MlpParams {
    /// Glorot-uniform weights (`+-sqrt(6 / (fan_in + fan_out))`), zero
    /// biases.
    pub fn init<R: Rng>(input_dim: usize, hidden: usize, rng: &mut R) -> MlpParams {
        let limit1 = (6.0 / (input_dim + hidden) as f64).sqrt();
        let mut w1 = Matrix::zeros(hidden, input_dim);
        for i in 0..hidden {
            for j in 0..input_dim {
                w1.set(i, j, rng.gen_range(-limit1..limit1));
            }
        }
        let limit2 = (6.0 / (hidden + 1) as f64).sqrt();
        let w2 = (0..hidden).map(|_| rng.gen_range(-limit2..limit2)).collect();
        MlpParams {
            w1,
            b1: vec![0.0; hidden],
            w2,
            b2: 0.0,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w1.cols()
    }

    pub fn hidden_width(&self) -> usize {
        self.w1.rows()
    }

    /// Deterministic inference-mode forward pass for one row.
    pub fn forward(&self, row: &[f64]) -> f64 {
        let mut out = self.b2;
        for h in 0..self.hidden_width() {
            let mut pre = self.b1[h];
            for (w, v) in self.w1.row(h).iter().zip(row) {
                pre += w * v;
            }
            if pre > 0.0 {
                out += self.w2[h] * pre;
            }
        }
        out
    }

    fn zeros_like(&self) -> MlpParams {
        MlpParams {
            w1: Matrix::zeros(self.hidden_width(), self.input_dim()),
            b1: vec![0.0; self.hidden_width()],
            w2: vec![0.0; self.hidden_width()],
            b2: 0.0,
        }
    }
}

/// One epoch line of the training history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_rmse: f64,
    pub validation_rmse: f64,
}

/// Trained network. The stored parameters are the snapshot from the epoch
/// with the lowest validation RMSE, not from the final epoch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub params: MlpParams,
    pub dropout_rate: f64,
    pub best_epoch: usize,
    pub training_history: Vec<EpochStats>,
}

impl MlpModel {
    pub fn n_features(&self) -> usize {
        self.params.input_dim()
    }

    /// Validation RMSE at the checkpointed epoch.
    pub fn best_validation_rmse(&self) -> f64 {
        self.training_history[self.best_epoch - 1].validation_rmse
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.params.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.params.input_dim(),
                actual: x.cols(),
            });
        }
        Ok(x.row_iter().map(|row| self.params.forward(row)).collect())
    }

    /// History as delimited text: `epoch,train_rmse,validation_rmse`.
    pub fn history_delimited(&self) -> String {
        let mut out = String::from("epoch,train_rmse,validation_rmse\n");
        for e in &self.training_history {
            out.push_str(&format!(
                "{},{},{}\n",
                e.epoch, e.train_rmse, e.validation_rmse
            ));
        }
        out
    }
}

/// Mean-squared-error loss and its gradients for a batch, dropout
/// disabled. This is the path finite-difference checks exercise.
#[allow(clippy::needless_range_loop)]
pub fn loss_and_gradients(params: &MlpParams, x: &Matrix, y: &[f64]) -> (f64, MlpParams) {
    loss_and_gradients_masked(params, x, y, None, 1.0)
}

/// As [`loss_and_gradients`], with optional per-sample hidden dropout
/// masks. `keep` is the keep probability; surviving activations are
/// scaled by `1/keep` (inverted dropout).
#[allow(clippy::needless_range_loop)]
fn loss_and_gradients_masked(
    params: &MlpParams,
    x: &Matrix,
    y: &[f64],
    masks: Option<&[Vec<bool>]>,
    keep: f64,
) -> (f64, MlpParams) {
    let batch = x.rows();
    let hidden = params.hidden_width();
    let mut grads = params.zeros_like();
    let mut loss = 0.0;
    let inv_batch = 1.0 / batch as f64;

    let mut pre = vec![0.0; hidden];
    let mut act = vec![0.0; hidden];
    for s in 0..batch {
        let row = x.row(s);
        for h in 0..hidden {
            let mut acc = params.b1[h];
            for (w, v) in params.w1.row(h).iter().zip(row) {
                acc += w * v;
            }
            pre[h] = acc;
            let mut a = acc.max(0.0);
            if let Some(masks) = masks {
                a = if masks[s][h] { a / keep } else { 0.0 };
            }
            act[h] = a;
        }
        let mut yhat = params.b2;
        for h in 0..hidden {
            yhat += params.w2[h] * act[h];
        }
        let err = yhat - y[s];
        loss += err * err * inv_batch;

        // d loss / d yhat for this sample
        let dy = 2.0 * err * inv_batch;
        grads.b2 += dy;
        for h in 0..hidden {
            grads.w2[h] += dy * act[h];
            let mut da = dy * params.w2[h];
            if let Some(masks) = masks {
                da = if masks[s][h] { da / keep } else { 0.0 };
            }
            if pre[h] > 0.0 {
                grads.b1[h] += da;
                for (j, v) in row.iter().enumerate() {
                    grads.w1[(h, j)] += da * v;
                }
            }
        }
    }
    (loss, grads)
}

/// Adam state mirroring the parameter shapes.
struct Adam {
    m: MlpParams,
    v: MlpParams,
    step: u64,
}

impl Adam {
    fn new(shape: &MlpParams) -> Adam {
        Adam {
            m: shape.zeros_like(),
            v: shape.zeros_like(),
            step: 0,
        }
    }

    fn update(&mut self, params: &mut MlpParams, grads: &MlpParams, cfg: &TrainConfig) {
        self.step += 1;
        let correction1 = 1.0 - cfg.beta1.powi(self.step as i32);
        let correction2 = 1.0 - cfg.beta2.powi(self.step as i32);
        let apply = |p: &mut f64, m: &mut f64, v: &mut f64, g: f64| {
            *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
            *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
            let m_hat = *m / correction1;
            let v_hat = *v / correction2;
            *p -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.adam_epsilon);
        };
        let hidden = params.hidden_width();
        let input = params.input_dim();
        for h in 0..hidden {
            for j in 0..input {
                apply(
                    &mut params.w1[(h, j)],
                    &mut self.m.w1[(h, j)],
                    &mut self.v.w1[(h, j)],
                    grads.w1[(h, j)],
                );
            }
            apply(
                &mut params.b1[h],
                &mut self.m.b1[h],
                &mut self.v.b1[h],
                grads.b1[h],
            );
            apply(
                &mut params.w2[h],
                &mut self.m.w2[h],
                &mut self.v.w2[h],
                grads.w2[h],
            );
        }
        apply(&mut params.b2, &mut self.m.b2, &mut self.v.b2, grads.b2);
    }
}

fn inference_rmse(params: &MlpParams, x: &Matrix, y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (row, &target) in x.row_iter().zip(y) {
        let d = params.forward(row) - target;
        acc += d * d;
    }
    (acc / y.len() as f64).sqrt()
}

/// Train with Adam over shuffled mini-batches and return the
/// best-validation-epoch snapshot.
///
/// Randomness (weight init, batch order, dropout masks) flows from named
/// sub-streams of `config.seed`, so runs replay exactly.
pub fn train_mlp(
    x_train: &Matrix,
    y_train: &[f64],
    x_val: &Matrix,
    y_val: &[f64],
    config: &TrainConfig,
) -> Result<MlpModel> {
    config.validate()?;
    if x_train.rows() != y_train.len() {
        return Err(Error::LengthMismatch {
            left: x_train.rows(),
            right: y_train.len(),
        });
    }
    if x_val.rows() != y_val.len() {
        return Err(Error::LengthMismatch {
            left: x_val.rows(),
            right: y_val.len(),
        });
    }
    if x_train.rows() == 0 {
        return Err(Error::InvalidParameter("empty training set".into()));
    }
    if x_val.rows() == 0 {
        return Err(Error::EmptyValidation);
    }
    if x_val.cols() != x_train.cols() {
        return Err(Error::DimensionMismatch {
            expected: x_train.cols(),
            actual: x_val.cols(),
        });
    }

    let mut init_rng = stream_rng(config.seed, "mlp-init");
    let mut batch_rng = stream_rng(config.seed, "mlp-batch");
    let mut dropout_rng = stream_rng(config.seed, "mlp-dropout");

    let mut params = MlpParams::init(x_train.cols(), config.hidden_width, &mut init_rng);
    let mut adam = Adam::new(&params);
    let keep = 1.0 - config.dropout_rate;

    let mut history = Vec::with_capacity(config.max_epochs);
    let mut best_epoch = 0usize;
    let mut best_rmse = f64::INFINITY;
    let mut best_params = params.clone();

    let n = x_train.rows();
    let mut order: Vec<usize> = (0..n).collect();

    for epoch in 1..=config.max_epochs {
        use rand::seq::SliceRandom;
        order.shuffle(&mut batch_rng);

        for chunk in order.chunks(config.batch_size) {
            let xb = x_train.select_rows(chunk);
            let yb: Vec<f64> = chunk.iter().map(|&i| y_train[i]).collect();
            let masks: Option<Vec<Vec<bool>>> = if config.dropout_rate > 0.0 {
                Some(
                    (0..chunk.len())
                        .map(|_| {
                            (0..config.hidden_width)
                                .map(|_| dropout_rng.gen::<f64>() < keep)
                                .collect()
                        })
                        .collect(),
                )
            } else {
                None
            };
            let (loss, grads) =
                loss_and_gradients_masked(&params, &xb, &yb, masks.as_deref(), keep);
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            adam.update(&mut params, &grads, config);
        }

        let train_rmse = inference_rmse(&params, x_train, y_train);
        let validation_rmse = inference_rmse(&params, x_val, y_val);
        if !train_rmse.is_finite() || !validation_rmse.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        history.push(EpochStats {
            epoch,
            train_rmse,
            validation_rmse,
        });
        if validation_rmse < best_rmse {
            best_rmse = validation_rmse;
            best_epoch = epoch;
            best_params = params.clone();
        }
    }

    Ok(MlpModel {
        params: best_params,
        dropout_rate: config.dropout_rate,
        best_epoch,
        training_history: history,
    })
}
