//! Derivative-free minimization with COBYLA.
//!
//! This is Powell's Constrained Optimization BY Linear Approximations with
//! the constraint set empty, which is all the classifier needs. The method
//! keeps `d + 1` interpolation points (a simplex) that define a linear model
//! of the objective, takes steps of length `ρ` down the model gradient, and
//! halves `ρ` from `rho_begin` towards `rho_end` whenever the simplex is
//! well shaped but steps stop paying off.
//!
//! Simplex maintenance follows the original rules: a vertex further than
//! `2.1ρ` from the best point, or closer than `0.25ρ` to its opposite face,
//! triggers a geometry step of length `0.5ρ`; trust-region points replace
//! the vertex that keeps the simplex volume largest. If the simplex still
//! collapses numerically, the worst vertex is re-seeded at distance `ρ`
//! along the direction the other edges span least.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config_err, Error, Result};
use crate::linalg::{dot, invert, norm, Matrix};
use crate::rng::Xorshift64Star;

// Powell's simplex constants.
const ALPHA: f64 = 0.25;
const BETA: f64 = 2.1;
const GAMMA: f64 = 0.5;
const DELTA: f64 = 1.1;
const SINGULAR_PIVOT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizerConfig {
    /// Hard cap on objective calls.
    pub max_evaluations: usize,
    /// Initial trust-region radius.
    pub rho_begin: f64,
    /// Final trust-region radius.
    pub rho_end: f64,
    /// Seed for the starting point drawn by callers via [`random_init`].
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_evaluations: 100,
            rho_begin: 1.0,
            rho_end: 1e-4,
            seed: 42,
        }
    }
}

impl OptimizerConfig {
    pub fn with_budget(max_evaluations: usize) -> Self {
        Self {
            max_evaluations,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evaluations == 0 {
            return Err(config_err!("max_evaluations must be at least 1"));
        }
        if !(self.rho_begin > 0.0 && self.rho_end > 0.0) {
            return Err(config_err!(
                "trust-region radii must be positive (rho_begin={}, rho_end={})",
                self.rho_begin,
                self.rho_end
            ));
        }
        if self.rho_end >= self.rho_begin {
            return Err(config_err!(
                "rho_end ({}) must be smaller than rho_begin ({})",
                self.rho_end,
                self.rho_begin
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Termination {
    BudgetExhausted,
    RhoConverged,
}

/// One objective call: 1-based evaluation number and the value returned.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Evaluation {
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub evaluations_used: usize,
    pub history: Vec<Evaluation>,
    pub termination: Termination,
}

impl OptimResult {
    /// Running minimum of the history.
    pub fn best_so_far(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.history
            .iter()
            .map(|e| {
                best = best.min(e.value);
                best
            })
            .collect()
    }
}

/// Seeded uniform draws in `[low, high)`; requires `low < high`.
pub fn random_init(dimension: usize, low: f64, high: f64, seed: u64) -> Vec<f64> {
    let mut rng = Xorshift64Star::new(seed);
    (0..dimension).map(|_| rng.uniform(low, high)).collect()
}

// Budget-aware objective wrapper that owns the history.
struct Counted<F> {
    objective: F,
    max_evaluations: usize,
    history: Vec<Evaluation>,
    best_point: Vec<f64>,
    best_value: f64,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    /// `Ok(None)` once the budget is spent.
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.history.len() >= self.max_evaluations {
            return Ok(None);
        }
        let value = (self.objective)(x);
        let index = self.history.len() + 1;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective {
                evaluation: index,
                value,
                point: x.to_vec(),
            });
        }
        self.history.push(Evaluation { index, value });
        if value < self.best_value {
            self.best_value = value;
            self.best_point.clear();
            self.best_point.extend_from_slice(x);
        }
        Ok(Some(value))
    }

    fn finish(self, termination: Termination) -> OptimResult {
        OptimResult {
            evaluations_used: self.history.len(),
            best_point: self.best_point,
            best_value: self.best_value,
            history: self.history,
            termination,
        }
    }
}

// The simplex: best vertex `base` plus offsets `edges[j]` to the others.
struct Simplex {
    base: Vec<f64>,
    f_base: f64,
    edges: Vec<Vec<f64>>,
    f_edges: Vec<f64>,
}

impl Simplex {
    fn point(&self, step: &[f64]) -> Vec<f64> {
        self.base.iter().zip(step).map(|(b, s)| b + s).collect()
    }

    /// Moves the lowest vertex into the base slot.
    fn rebase_on_best(&mut self) {
        let mut best: Option<usize> = None;
        let mut f_best = self.f_base;
        for (j, &fj) in self.f_edges.iter().enumerate() {
            if fj < f_best {
                best = Some(j);
                f_best = fj;
            }
        }
        let Some(j) = best else { return };
        let shift = core::mem::take(&mut self.edges[j]);
        for (b, s) in self.base.iter_mut().zip(&shift) {
            *b += s;
        }
        for (k, edge) in self.edges.iter_mut().enumerate() {
            if k != j {
                for (e, s) in edge.iter_mut().zip(&shift) {
                    *e -= s;
                }
            }
        }
        self.edges[j] = shift.iter().map(|s| -s).collect();
        core::mem::swap(&mut self.f_base, &mut self.f_edges[j]);
    }

    /// Inverse of the matrix whose columns are the edges; row `j` is the
    /// dual vector of edge `j`.
    fn dual_rows(&self) -> Option<Matrix> {
        let d = self.base.len();
        let mut m = Matrix::zeros(d, d);
        for (j, edge) in self.edges.iter().enumerate() {
            for (i, &v) in edge.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        invert(&m, SINGULAR_PIVOT)
    }

    /// Unit vector least represented by the edges other than `skip`.
    fn fresh_direction(&self, skip: usize) -> Vec<f64> {
        let d = self.base.len();
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
        for (k, edge) in self.edges.iter().enumerate() {
            if k == skip {
                continue;
            }
            let mut r = edge.clone();
            orthogonalize(&mut r, &basis);
            let n = norm(&r);
            if n > 1e-10 * norm(edge).max(f64::MIN_POSITIVE) {
                r.iter_mut().for_each(|v| *v /= n);
                basis.push(r);
            }
        }
        let mut best = vec![0.0; d];
        let mut best_norm = -1.0;
        for axis in 0..d {
            let mut r = vec![0.0; d];
            r[axis] = 1.0;
            orthogonalize(&mut r, &basis);
            let n = norm(&r);
            if n > best_norm {
                best_norm = n;
                best = r;
            }
        }
        best.iter_mut().for_each(|v| *v /= best_norm);
        best
    }
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let p = dot(v, q);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= p * y;
            }
        }
    }
}

/// Minimizes `objective` from `start`.
///
/// Never calls the objective more than `config.max_evaluations` times and
/// returns the best point evaluated. A NaN or infinite objective value
/// aborts with [`Error::NonFiniteObjective`].
pub fn cobyla_minimize<F>(objective: F, start: &[f64], config: &OptimizerConfig) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    let d = start.len();
    if d == 0 {
        return Err(config_err!("cannot optimize over zero parameters"));
    }
    if start.iter().any(|v| !v.is_finite()) {
        return Err(config_err!("starting point has non-finite entries"));
    }

    let mut counted = Counted {
        objective,
        max_evaluations: config.max_evaluations,
        history: Vec::new(),
        best_point: start.to_vec(),
        best_value: f64::INFINITY,
    };
    let mut rho = config.rho_begin;

    let Some(f_start) = counted.eval(start)? else {
        return Ok(counted.finish(Termination::BudgetExhausted));
    };
    let mut simplex = Simplex {
        base: start.to_vec(),
        f_base: f_start,
        edges: Vec::with_capacity(d),
        f_edges: Vec::with_capacity(d),
    };
    for axis in 0..d {
        let mut step = vec![0.0; d];
        step[axis] = rho;
        let Some(f) = counted.eval(&simplex.point(&step))? else {
            return Ok(counted.finish(Termination::BudgetExhausted));
        };
        simplex.edges.push(step);
        simplex.f_edges.push(f);
    }

    // Set after a trust-region step; suppresses geometry steps until the
    // current radius stops producing progress.
    let mut after_trust_step = false;
    loop {
        simplex.rebase_on_best();

        let Some(dual) = simplex.dual_rows() else {
            let worst = (0..d)
                .max_by(|&a, &b| simplex.f_edges[a].total_cmp(&simplex.f_edges[b]))
                .unwrap_or(0);
            let step: Vec<f64> = simplex.fresh_direction(worst).iter().map(|u| u * rho).collect();
            let Some(f) = counted.eval(&simplex.point(&step))? else {
                return Ok(counted.finish(Termination::BudgetExhausted));
            };
            simplex.edges[worst] = step;
            simplex.f_edges[worst] = f;
            continue;
        };

        // Linear model gradient: g = Σ_j (f_j − f_0) · dual_j.
        let mut grad = vec![0.0; d];
        for j in 0..d {
            let df = simplex.f_edges[j] - simplex.f_base;
            for (g, &s) in grad.iter_mut().zip(dual.row(j)) {
                *g += df * s;
            }
        }

        let face_dist: Vec<f64> = (0..d).map(|j| 1.0 / norm(dual.row(j))).collect();
        let edge_len: Vec<f64> = simplex.edges.iter().map(|e| norm(e)).collect();
        let min_face = ALPHA * rho;
        let max_edge = BETA * rho;
        let acceptable = face_dist.iter().all(|&s| s >= min_face) && edge_len.iter().all(|&e| e <= max_edge);

        if !after_trust_step && !acceptable {
            // Geometry step: replace the vertex that spoils the shape.
            let jdrop = match argmax(&edge_len) {
                Some((j, len)) if len > max_edge => j,
                _ => argmin(&face_dist).map_or(0, |(j, _)| j),
            };
            let scale = GAMMA * rho * face_dist[jdrop];
            let mut step: Vec<f64> = dual.row(jdrop).iter().map(|v| v * scale).collect();
            if dot(&grad, &step) > 0.0 {
                step.iter_mut().for_each(|v| *v = -*v);
            }
            let Some(f) = counted.eval(&simplex.point(&step))? else {
                return Ok(counted.finish(Termination::BudgetExhausted));
            };
            simplex.edges[jdrop] = step;
            simplex.f_edges[jdrop] = f;
            continue;
        }

        let grad_norm = norm(&grad);
        let mut keep_radius = false;
        if grad_norm > 0.0 && grad_norm.is_finite() {
            let step: Vec<f64> = grad.iter().map(|g| -rho * g / grad_norm).collect();
            let Some(f_new) = counted.eval(&simplex.point(&step))? else {
                return Ok(counted.finish(Termination::BudgetExhausted));
            };
            after_trust_step = true;
            let actual = simplex.f_base - f_new;
            let predicted = rho * grad_norm;

            // Vertex to drop: with no decrease the new point must enlarge the
            // simplex (|σ_j| > 1); far vertices with adequate volume win.
            let sigma: Vec<f64> = (0..d).map(|j| dot(dual.row(j), &step).abs()).collect();
            let mut jdrop = None;
            let mut threshold = if actual <= 0.0 { 1.0 } else { 0.0 };
            for (j, &s) in sigma.iter().enumerate() {
                if s > threshold {
                    jdrop = Some(j);
                    threshold = s;
                }
            }
            let mut far_edge = DELTA * rho;
            for j in 0..d {
                let sigbar = sigma[j] * face_dist[j];
                if sigbar >= min_face || sigbar >= face_dist[j] {
                    let dist = if actual > 0.0 {
                        let diff: Vec<f64> = step.iter().zip(&simplex.edges[j]).map(|(a, b)| a - b).collect();
                        norm(&diff)
                    } else {
                        edge_len[j]
                    };
                    if dist > far_edge {
                        far_edge = dist;
                        jdrop = Some(j);
                    }
                }
            }
            if let Some(j) = jdrop {
                simplex.edges[j] = step;
                simplex.f_edges[j] = f_new;
                keep_radius = actual > 0.0 && actual >= 0.1 * predicted;
            }
        }
        if keep_radius {
            continue;
        }

        if !acceptable {
            after_trust_step = false;
            continue;
        }
        if rho <= config.rho_end {
            return Ok(counted.finish(Termination::RhoConverged));
        }
        rho *= 0.5;
        if rho <= 1.5 * config.rho_end {
            rho = config.rho_end;
        }
    }
}

fn argmax(v: &[f64]) -> Option<(usize, f64)> {
    v.iter().copied().enumerate().fold(None, |acc, (i, x)| match acc {
        Some((_, best)) if best >= x => acc,
        _ => Some((i, x)),
    })
}

fn argmin(v: &[f64]) -> Option<(usize, f64)> {
    v.iter().copied().enumerate().fold(None, |acc, (i, x)| match acc {
        Some((_, best)) if best <= x => acc,
        _ => Some((i, x)),
    })
}
