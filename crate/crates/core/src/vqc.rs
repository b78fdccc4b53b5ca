//! Variational quantum classifier.
//!
//! A sample `x` is encoded by the feature map, rotated by the ansatz and
//! read out as `f(x, θ) = ⟨Z_q⟩ ∈ [−1, 1]`. Class 0 (benign) is trained
//! towards `+1` and class 1 (ransomware) towards `−1`; the prediction is
//! class 0 when `f ≥ 0`. Training minimizes the mean squared error between
//! `f` and those `±1` targets with COBYLA.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::circuits::{AnsatzSpec, FeatureMapSpec, ParameterVector};
use crate::error::{config_err, Error, Result};
use crate::exec::{Clock, Executor, Sequential};
use crate::linalg::Matrix;
use crate::math;
use crate::optim::{cobyla_minimize, random_init, OptimizerConfig, Termination};
use crate::qsim::{Gate, Observable, StateVector};
use crate::rng::Xorshift64Star;

/// Regression target for a class label: 0 → +1, 1 → −1.
#[inline]
pub fn target(label: u8) -> f64 {
    if label == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Thresholds a score at zero; a score of exactly 0 is benign.
#[inline]
pub fn class_from_score(score: f64) -> u8 {
    u8::from(score < 0.0)
}

/// Score mapped to a pseudo-probability of ransomware, `(1 − f) / 2`.
#[inline]
pub fn ransomware_probability(score: f64) -> f64 {
    (1.0 - score) / 2.0
}

/// Circuit structure without trained parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VqcShape {
    pub feature_map: FeatureMapSpec,
    pub ansatz: AnsatzSpec,
    pub observable: Observable,
}

impl VqcShape {
    /// Z on qubit 0 as the readout.
    pub fn new(feature_map: FeatureMapSpec, ansatz: AnsatzSpec) -> Result<Self> {
        Self::with_observable(feature_map, ansatz, Observable::z(0))
    }

    pub fn with_observable(feature_map: FeatureMapSpec, ansatz: AnsatzSpec, observable: Observable) -> Result<Self> {
        if feature_map.n_qubits() != ansatz.n_qubits() {
            return Err(config_err!(
                "feature map has {} qubits but ansatz has {}",
                feature_map.n_qubits(),
                ansatz.n_qubits()
            ));
        }
        if observable.qubit >= ansatz.n_qubits() {
            return Err(config_err!(
                "observable qubit {} out of range for {} qubits",
                observable.qubit,
                ansatz.n_qubits()
            ));
        }
        Ok(Self {
            feature_map,
            ansatz,
            observable,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.ansatz.n_qubits()
    }

    pub fn parameter_count(&self) -> usize {
        self.ansatz.parameter_count()
    }

    /// `U_Φ(x)|0…0⟩`.
    pub fn encode(&self, x: &[f64]) -> Result<StateVector> {
        let mut state = StateVector::zero_state(self.n_qubits())?;
        state.apply_all(&self.feature_map.build(x)?)?;
        Ok(state)
    }

    /// Readout after applying pre-built ansatz gates to an encoded state.
    pub fn score_encoded(&self, encoded: &StateVector, ansatz: &[Gate]) -> Result<f64> {
        let mut state = encoded.clone();
        state.apply_all(ansatz)?;
        state.expectation_z(self.observable.qubit)
    }

    /// `f(x, θ)`.
    pub fn decision_score(&self, theta: &[f64], x: &[f64]) -> Result<f64> {
        let encoded = self.encode(x)?;
        self.score_encoded(&encoded, &self.ansatz.build(theta)?)
    }

    /// Like [`VqcShape::decision_score`] but estimated from `shots`
    /// measurements.
    pub fn sampled_score(&self, theta: &[f64], x: &[f64], shots: usize, seed: u64) -> Result<f64> {
        let mut state = self.encode(x)?;
        state.apply_all(&self.ansatz.build(theta)?)?;
        state.sample_z(self.observable.qubit, shots, seed)
    }
}

/// Trained classifier.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VqcModel {
    pub shape: VqcShape,
    pub theta: ParameterVector,
}

impl VqcModel {
    pub fn new(shape: VqcShape, theta: ParameterVector) -> Result<Self> {
        if theta.len() != shape.parameter_count() {
            return Err(config_err!(
                "theta has {} entries, shape needs {}",
                theta.len(),
                shape.parameter_count()
            ));
        }
        Ok(Self { shape, theta })
    }

    pub fn decision_score(&self, x: &[f64]) -> Result<f64> {
        self.shape.decision_score(self.theta.as_slice(), x)
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        Ok(class_from_score(self.decision_score(x)?))
    }

    /// Scores for every row, fanned out through `exec`.
    pub fn scores<E: Executor>(&self, x: &Matrix, exec: &E) -> Result<Vec<f64>> {
        check_width(&self.shape, x)?;
        let gates = self.shape.ansatz.build(self.theta.as_slice())?;
        exec.map(x.rows(), |i| {
            let encoded = self.shape.encode(x.row(i))?;
            self.shape.score_encoded(&encoded, &gates)
        })
        .into_iter()
        .collect()
    }

    /// Shot-sampled scores; row `i` uses seed `seed + i`.
    pub fn sampled_scores<E: Executor>(&self, x: &Matrix, shots: usize, seed: u64, exec: &E) -> Result<Vec<f64>> {
        check_width(&self.shape, x)?;
        exec.map(x.rows(), |i| {
            self.shape
                .sampled_score(self.theta.as_slice(), x.row(i), shots, seed.wrapping_add(i as u64))
        })
        .into_iter()
        .collect()
    }
}

fn check_width(shape: &VqcShape, x: &Matrix) -> Result<()> {
    if x.cols() != shape.n_qubits() {
        return Err(config_err!(
            "samples have {} features, classifier has {} qubits",
            x.cols(),
            shape.n_qubits()
        ));
    }
    Ok(())
}

fn check_dataset(shape: &VqcShape, x: &Matrix, y: &[u8]) -> Result<()> {
    if x.rows() == 0 {
        return Err(config_err!("empty dataset"));
    }
    if x.rows() != y.len() {
        return Err(config_err!("{} rows but {} labels", x.rows(), y.len()));
    }
    if let Some(i) = y.iter().position(|&l| l > 1) {
        return Err(config_err!("label {} at row {i} is not 0 or 1", y[i]));
    }
    check_width(shape, x)
}

/// Mean squared error between scores and `±1` targets.
pub fn mse(scores: &[f64], targets: &[f64]) -> f64 {
    let sum: f64 = scores.iter().zip(targets).map(|(s, t)| (s - t) * (s - t)).sum();
    sum / scores.len() as f64
}

/// Training set with the feature map already applied. The encoded states
/// do not depend on θ, so each cost evaluation only runs the ansatz.
#[derive(Debug, Clone)]
pub struct EncodedSet {
    states: Vec<StateVector>,
    targets: Vec<f64>,
}

impl EncodedSet {
    pub fn new<E: Executor>(shape: &VqcShape, x: &Matrix, y: &[u8], exec: &E) -> Result<Self> {
        check_dataset(shape, x, y)?;
        let states = exec
            .map(x.rows(), |i| shape.encode(x.row(i)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            states,
            targets: y.iter().map(|&l| target(l)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn scores<E: Executor>(&self, shape: &VqcShape, theta: &[f64], exec: &E) -> Result<Vec<f64>> {
        let gates = shape.ansatz.build(theta)?;
        exec.map(self.states.len(), |i| shape.score_encoded(&self.states[i], &gates))
            .into_iter()
            .collect()
    }

    /// `C(θ) = (1/N) Σ (f(x_i, θ) − ỹ_i)²`.
    pub fn cost<E: Executor>(&self, shape: &VqcShape, theta: &[f64], exec: &E) -> Result<f64> {
        Ok(mse(&self.scores(shape, theta, exec)?, &self.targets))
    }
}

/// MSE cost of `theta` on `(x, y)`.
pub fn cost(shape: &VqcShape, theta: &[f64], x: &Matrix, y: &[u8]) -> Result<f64> {
    EncodedSet::new(shape, x, y, &Sequential)?.cost(shape, theta, &Sequential)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostRecord {
    /// 1-based objective evaluation number.
    pub iteration: usize,
    pub cost: f64,
    /// Wall time spent in this evaluation.
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainLog {
    pub cost_history: Vec<CostRecord>,
    pub initial_theta: Vec<f64>,
    pub final_theta: Vec<f64>,
    pub best_cost: f64,
    pub evaluations_used: usize,
    pub termination: Termination,
    /// COBYLA shrank its radius to `rho_end` before the budget ran out.
    pub converged: bool,
}

impl TrainLog {
    /// Running minimum of the cost history.
    pub fn best_so_far(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.cost_history
            .iter()
            .map(|r| {
                best = best.min(r.cost);
                best
            })
            .collect()
    }
}

/// Minimizes an arbitrary cost over `parameter_count` angles, starting
/// from a seeded uniform draw in `[−π, π)`.
pub fn optimize_parameters<F, C>(
    parameter_count: usize,
    mut objective: F,
    config: &OptimizerConfig,
    seed: u64,
    clock: &C,
) -> Result<(ParameterVector, TrainLog)>
where
    F: FnMut(&[f64]) -> Result<f64>,
    C: Clock,
{
    config.validate()?;
    if parameter_count == 0 {
        return Err(config_err!("nothing to train: zero parameters"));
    }
    let initial_theta = random_init(parameter_count, -PI, PI, seed);
    let mut durations = Vec::new();
    let mut failure: Option<Error> = None;
    let result = cobyla_minimize(
        |theta| {
            let started = clock.now_seconds();
            let value = match objective(theta) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            };
            durations.push(clock.now_seconds() - started);
            value
        },
        &initial_theta,
        config,
    );
    let result = match result {
        Ok(r) => r,
        Err(Error::NonFiniteObjective { evaluation, value, .. }) => {
            let message = match failure {
                Some(e) => format!("cost evaluation failed: {e}"),
                None => format!("cost evaluated to {value}"),
            };
            return Err(Error::Training {
                iteration: evaluation,
                message,
            });
        }
        Err(e) => return Err(e),
    };
    let cost_history = result
        .history
        .iter()
        .zip(&durations)
        .map(|(e, &wall_time_seconds)| CostRecord {
            iteration: e.index,
            cost: e.value,
            wall_time_seconds,
        })
        .collect();
    let log = TrainLog {
        cost_history,
        initial_theta,
        final_theta: result.best_point.clone(),
        best_cost: result.best_value,
        evaluations_used: result.evaluations_used,
        termination: result.termination,
        converged: result.termination == Termination::RhoConverged,
    };
    Ok((ParameterVector(result.best_point), log))
}

/// Trains a classifier of the given shape on `(x, y)`.
pub fn train<E: Executor, C: Clock>(
    shape: &VqcShape,
    x: &Matrix,
    y: &[u8],
    config: &OptimizerConfig,
    seed: u64,
    exec: &E,
    clock: &C,
) -> Result<(VqcModel, TrainLog)> {
    let encoded = EncodedSet::new(shape, x, y, exec)?;
    let (theta, log) = optimize_parameters(
        shape.parameter_count(),
        |theta| encoded.cost(shape, theta, exec),
        config,
        seed,
        clock,
    )?;
    Ok((VqcModel::new(shape.clone(), theta)?, log))
}

/// Central differences `(C(θ + εe_j) − C(θ − εe_j)) / 2ε`.
pub fn finite_difference_gradient(
    shape: &VqcShape,
    theta: &[f64],
    x: &Matrix,
    y: &[u8],
    epsilon: f64,
) -> Result<Vec<f64>> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(config_err!("finite-difference step must be positive, got {epsilon}"));
    }
    let encoded = EncodedSet::new(shape, x, y, &Sequential)?;
    let mut shifted = theta.to_vec();
    (0..theta.len())
        .map(|j| {
            shifted[j] = theta[j] + epsilon;
            let plus = encoded.cost(shape, &shifted, &Sequential)?;
            shifted[j] = theta[j] - epsilon;
            let minus = encoded.cost(shape, &shifted, &Sequential)?;
            shifted[j] = theta[j];
            Ok((plus - minus) / (2.0 * epsilon))
        })
        .collect()
}

/// Exact gradient of the MSE cost. Every parameter is a single RY angle, so
/// `∂f/∂θ_j = (f(θ + π/2·e_j) − f(θ − π/2·e_j)) / 2` and
/// `∂C/∂θ_j = (2/N) Σ_i (f_i − ỹ_i) ∂f_i/∂θ_j`.
pub fn parameter_shift_gradient(shape: &VqcShape, theta: &[f64], x: &Matrix, y: &[u8]) -> Result<Vec<f64>> {
    let encoded = EncodedSet::new(shape, x, y, &Sequential)?;
    parameter_shift_encoded(shape, theta, &encoded)
}

fn parameter_shift_encoded(shape: &VqcShape, theta: &[f64], encoded: &EncodedSet) -> Result<Vec<f64>> {
    let base = encoded.scores(shape, theta, &Sequential)?;
    let residual: Vec<f64> = base.iter().zip(encoded.targets()).map(|(f, t)| f - t).collect();
    let n = encoded.len() as f64;
    let mut shifted = theta.to_vec();
    (0..theta.len())
        .map(|j| {
            shifted[j] = theta[j] + FRAC_PI_2;
            let plus = encoded.scores(shape, &shifted, &Sequential)?;
            shifted[j] = theta[j] - FRAC_PI_2;
            let minus = encoded.scores(shape, &shifted, &Sequential)?;
            shifted[j] = theta[j];
            let sum: f64 = residual
                .iter()
                .zip(plus.iter().zip(&minus))
                .map(|(r, (p, m))| r * (p - m) / 2.0)
                .sum();
            Ok(2.0 * sum / n)
        })
        .collect()
}

/// Spread of cost gradients over random parameter draws.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradientStats {
    pub n_qubits: usize,
    pub samples: usize,
    pub mean_norm: f64,
    /// Variance of `∂C/∂θ_0` across draws.
    pub first_component_variance: f64,
}

/// Barren-plateau probe: parameter-shift gradients at `samples` random
/// θ ∈ [−π, π)^p.
pub fn gradient_statistics(shape: &VqcShape, x: &Matrix, y: &[u8], samples: usize, seed: u64) -> Result<GradientStats> {
    if samples == 0 {
        return Err(config_err!("need at least one gradient sample"));
    }
    let encoded = EncodedSet::new(shape, x, y, &Sequential)?;
    let mut rng = Xorshift64Star::new(seed);
    let mut norms = 0.0;
    let mut first = Vec::with_capacity(samples);
    for _ in 0..samples {
        let theta: Vec<f64> = (0..shape.parameter_count()).map(|_| rng.uniform(-PI, PI)).collect();
        let g = parameter_shift_encoded(shape, &theta, &encoded)?;
        norms += math::sqrt(g.iter().map(|v| v * v).sum());
        first.push(g[0]);
    }
    let mean_first = first.iter().sum::<f64>() / samples as f64;
    let var = first.iter().map(|g| (g - mean_first) * (g - mean_first)).sum::<f64>() / samples as f64;
    Ok(GradientStats {
        n_qubits: shape.n_qubits(),
        samples,
        mean_norm: norms / samples as f64,
        first_component_variance: var,
    })
}
