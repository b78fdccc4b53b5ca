//! Logistic-regression baseline, `p(ransomware | x) = σ(wᵀx + b)`, fitted by
//! full-batch gradient descent on L2-regularized cross-entropy.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config_err, Result};
use crate::linalg::{dot, Matrix};
use crate::math;
use crate::rng::Xorshift64Star;

// Largest double below 1; keeps probabilities strictly inside (0, 1).
const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2_strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticConfig {
    /// Penalty `λ/2 · ‖w‖²` added to the mean loss; `None` means `1/N`.
    pub l2_strength: Option<f64>,
    pub max_epochs: usize,
    /// Initial step; halved whenever a step would raise the loss.
    pub learning_rate: f64,
    /// Controls the row order of the gradient sums only.
    pub seed: u64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            l2_strength: None,
            max_epochs: 500,
            learning_rate: 0.1,
            seed: 42,
        }
    }
}

/// Logistic function without overflow for large `|z|`.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + math::exp(-z))
    } else {
        let e = math::exp(z);
        e / (1.0 + e)
    }
}

// log(1 + e^z)
#[inline]
fn softplus(z: f64) -> f64 {
    z.max(0.0) + math::ln_1p(math::exp(-z.abs()))
}

impl LogisticModel {
    pub fn logit(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(config_err!(
                "model has {} weights, sample has {} features",
                self.weights.len(),
                x.len()
            ));
        }
        Ok(dot(&self.weights, x) + self.bias)
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        Ok(sigmoid(self.logit(x)?).clamp(f64::MIN_POSITIVE, ONE_MINUS_ULP))
    }

    /// Class 1 when `p ≥ 0.5`.
    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        Ok(u8::from(self.logit(x)? >= 0.0))
    }

    pub fn predict_proba_batch(&self, x: &Matrix) -> Result<Vec<f64>> {
        x.row_iter().map(|r| self.predict_proba(r)).collect()
    }
}

/// Regularized mean cross-entropy and its gradient `(∂w, ∂b)`.
pub fn loss_and_gradient(
    x: &Matrix,
    y: &[u8],
    weights: &[f64],
    bias: f64,
    l2: f64,
    order: &[usize],
) -> (f64, Vec<f64>, f64) {
    let n = x.rows() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for &i in order {
        let row = x.row(i);
        let z = dot(weights, row) + bias;
        let t = f64::from(y[i]);
        loss += softplus(z) - t * z;
        let r = sigmoid(z) - t;
        gb += r;
        for (g, &v) in gw.iter_mut().zip(row) {
            *g += r * v;
        }
    }
    let penalty = 0.5 * l2 * dot(weights, weights);
    for (g, &w) in gw.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (loss / n + penalty, gw, gb / n)
}

fn validate_training_set(x: &Matrix, y: &[u8]) -> Result<()> {
    if x.rows() != y.len() {
        return Err(config_err!("{} rows but {} labels", x.rows(), y.len()));
    }
    if let Some(i) = y.iter().position(|&l| l > 1) {
        return Err(config_err!("label {} at row {i} is not 0 or 1", y[i]));
    }
    let ones = y.iter().filter(|&&l| l == 1).count();
    if ones == 0 || ones == y.len() {
        return Err(config_err!("logistic regression needs samples of both classes"));
    }
    Ok(())
}

/// Fits from zero weights. The loss never increases between accepted steps.
pub fn fit_logistic(x: &Matrix, y: &[u8], config: &LogisticConfig) -> Result<LogisticModel> {
    validate_training_set(x, y)?;
    let l2 = config.l2_strength.unwrap_or(1.0 / x.rows() as f64);
    if !(l2 >= 0.0 && l2.is_finite()) {
        return Err(config_err!("l2_strength must be finite and non-negative, got {l2}"));
    }
    if !(config.learning_rate > 0.0 && config.learning_rate.is_finite()) {
        return Err(config_err!(
            "learning_rate must be positive, got {}",
            config.learning_rate
        ));
    }

    let order = Xorshift64Star::new(config.seed).permutation(x.rows());
    let mut weights = vec![0.0; x.cols()];
    let mut bias = 0.0;
    let mut lr = config.learning_rate;
    let (mut loss, mut gw, mut gb) = loss_and_gradient(x, y, &weights, bias, l2, &order);

    'epochs: for _ in 0..config.max_epochs {
        let grad_sq = dot(&gw, &gw) + gb * gb;
        if grad_sq < 1e-24 {
            break;
        }
        loop {
            let trial_w: Vec<f64> = weights.iter().zip(&gw).map(|(w, g)| w - lr * g).collect();
            let trial_b = bias - lr * gb;
            let (trial_loss, trial_gw, trial_gb) = loss_and_gradient(x, y, &trial_w, trial_b, l2, &order);
            if trial_loss <= loss {
                weights = trial_w;
                bias = trial_b;
                loss = trial_loss;
                gw = trial_gw;
                gb = trial_gb;
                break;
            }
            lr *= 0.5;
            if lr < 1e-16 * config.learning_rate {
                break 'epochs;
            }
        }
    }

    Ok(LogisticModel {
        weights,
        bias,
        l2_strength: l2,
    })
}

/// Regularized training loss of a fitted model.
pub fn training_loss(model: &LogisticModel, x: &Matrix, y: &[u8]) -> Result<f64> {
    validate_training_set(x, y)?;
    let order: Vec<usize> = (0..x.rows()).collect();
    Ok(loss_and_gradient(x, y, &model.weights, model.bias, model.l2_strength, &order).0)
}
