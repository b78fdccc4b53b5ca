//! Standardization and principal component analysis.
//!
//! Both transforms are fitted on training rows only and then applied
//! unchanged to any other split; `fit_*` and `transform_*` are separate
//! functions so test statistics can never reach a fitted model.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config_err, Result};
use crate::linalg::{dot, norm, symmetric_eigen, Matrix};
use crate::math;

/// Per-feature mean and population standard deviation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalerModel {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Features whose training variance is (numerically) zero; they
    /// transform to 0.
    pub zero_variance: Vec<bool>,
}

impl ScalerModel {
    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    pub fn zero_variance_count(&self) -> usize {
        self.zero_variance.iter().filter(|&&z| z).count()
    }
}

pub fn fit_scaler(x_train: &Matrix) -> Result<ScalerModel> {
    let n = x_train.rows();
    if n < 2 {
        return Err(config_err!("scaler needs at least 2 training rows, got {n}"));
    }
    let means = x_train.column_means();
    let mut var = vec![0.0; x_train.cols()];
    for row in x_train.row_iter() {
        for ((v, &x), &m) in var.iter_mut().zip(row).zip(&means) {
            *v += (x - m) * (x - m);
        }
    }
    let stds: Vec<f64> = var.iter().map(|v| math::sqrt(v / n as f64)).collect();
    let zero_variance = stds
        .iter()
        .zip(&means)
        .map(|(&s, &m)| s == 0.0 || s <= 8.0 * f64::EPSILON * m.abs())
        .collect();
    Ok(ScalerModel {
        means,
        stds,
        zero_variance,
    })
}

pub fn transform_scaler(model: &ScalerModel, x: &Matrix) -> Result<Matrix> {
    if x.cols() != model.n_features() {
        return Err(config_err!(
            "scaler fitted on {} features, input has {}",
            model.n_features(),
            x.cols()
        ));
    }
    let mut out = x.clone();
    for i in 0..out.rows() {
        for (j, v) in out.row_mut(i).iter_mut().enumerate() {
            *v = if model.zero_variance[j] {
                0.0
            } else {
                (*v - model.means[j]) / model.stds[j]
            };
        }
    }
    Ok(out)
}

/// How the principal axes are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PcaSolver {
    /// Covariance when `D ≤ N`, Gram otherwise.
    #[default]
    Auto,
    /// Eigen-decomposition of the `D × D` covariance.
    Covariance,
    /// Eigen-decomposition of the `N × N` Gram matrix, mapped back to
    /// feature space.
    Gram,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PcaModel {
    /// Training mean, length `D`.
    pub mean: Vec<f64>,
    /// `D × n` projection with orthonormal columns.
    pub components: Matrix,
    /// Sample variance (divide by `N − 1`) along each component, descending.
    pub explained_variance: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
    /// Sum of the per-feature sample variances.
    pub total_variance: f64,
}

impl PcaModel {
    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn n_components(&self) -> usize {
        self.components.cols()
    }
}

pub fn fit_pca(x_train: &Matrix, n_components: usize) -> Result<PcaModel> {
    fit_pca_with(x_train, n_components, PcaSolver::Auto)
}

pub fn fit_pca_with(x_train: &Matrix, n_components: usize, solver: PcaSolver) -> Result<PcaModel> {
    let (n, d) = (x_train.rows(), x_train.cols());
    if n < 2 {
        return Err(config_err!("PCA needs at least 2 training rows, got {n}"));
    }
    if n_components == 0 || n_components > d.min(n) {
        return Err(config_err!(
            "cannot extract {n_components} components from {n} rows x {d} features"
        ));
    }
    let mean = x_train.column_means();
    // centered data, stored feature-major so covariance entries are dot
    // products of contiguous rows
    let mut centered_t = Matrix::zeros(d, n);
    for (i, row) in x_train.row_iter().enumerate() {
        for (j, (&v, &m)) in row.iter().zip(&mean).enumerate() {
            centered_t[(j, i)] = v - m;
        }
    }
    let denom = (n - 1) as f64;
    let total_variance: f64 = (0..d).map(|j| dot(centered_t.row(j), centered_t.row(j)) / denom).sum();

    let use_gram = match solver {
        PcaSolver::Auto => d > n,
        PcaSolver::Covariance => false,
        PcaSolver::Gram => true,
    };

    let (values, mut components) = if use_gram {
        let centered = centered_t.transpose();
        let mut gram = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..=a {
                gram[(a, b)] = dot(centered.row(a), centered.row(b)) / denom;
            }
        }
        let eig = symmetric_eigen(&gram)?;
        let mut comps = Matrix::zeros(d, n_components);
        let floor = eig.values[0].abs() * 1e-12;
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(n_components);
        for k in 0..n_components {
            let lambda = eig.values[k];
            let mut w = if lambda > floor {
                // w = Xcᵀ u / ‖Xcᵀ u‖
                (0..d)
                    .map(|j| dot(centered_t.row(j), &eig.vectors.column(k)))
                    .collect::<Vec<_>>()
            } else {
                vec![0.0; d]
            };
            complete_orthonormal(&mut w, &kept);
            for j in 0..d {
                comps[(j, k)] = w[j];
            }
            kept.push(w);
        }
        (eig.values[..n_components].to_vec(), comps)
    } else {
        let mut cov = Matrix::zeros(d, d);
        for a in 0..d {
            for b in 0..=a {
                cov[(a, b)] = dot(centered_t.row(a), centered_t.row(b)) / denom;
            }
        }
        let eig = symmetric_eigen(&cov)?;
        let mut comps = Matrix::zeros(d, n_components);
        for k in 0..n_components {
            for j in 0..d {
                comps[(j, k)] = eig.vectors[(j, k)];
            }
        }
        (eig.values[..n_components].to_vec(), comps)
    };

    // Deterministic signs: the largest-magnitude entry of each axis is
    // positive.
    for k in 0..n_components {
        let mut pivot = 0;
        for j in 1..d {
            if components[(j, k)].abs() > components[(pivot, k)].abs() {
                pivot = j;
            }
        }
        if components[(pivot, k)] < 0.0 {
            for j in 0..d {
                components[(j, k)] = -components[(j, k)];
            }
        }
    }

    let explained_variance: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
    let explained_variance_ratio = explained_variance
        .iter()
        .map(|v| if total_variance > 0.0 { v / total_variance } else { 0.0 })
        .collect();
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
        explained_variance_ratio,
        total_variance,
    })
}

// Orthogonalizes `w` against `basis` and normalizes it; a vanishing
// residual is replaced by the coordinate axis least covered by `basis`.
fn complete_orthonormal(w: &mut Vec<f64>, basis: &[Vec<f64>]) {
    let project_out = |v: &mut [f64]| {
        for _ in 0..2 {
            for q in basis {
                let p = dot(v, q);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= p * y;
                }
            }
        }
    };
    let before = norm(w);
    project_out(w);
    let after = norm(w);
    if before > 0.0 && after > 1e-8 * before {
        w.iter_mut().for_each(|x| *x /= after);
        return;
    }
    let d = w.len();
    let mut best = vec![0.0; d];
    let mut best_norm = -1.0;
    for axis in 0..d {
        let mut e = vec![0.0; d];
        e[axis] = 1.0;
        project_out(&mut e);
        let r = norm(&e);
        if r > best_norm {
            best_norm = r;
            best = e;
        }
    }
    best.iter_mut().for_each(|x| *x /= best_norm);
    *w = best;
}

/// `(X − mean) · W_n`.
pub fn transform_pca(model: &PcaModel, x: &Matrix) -> Result<Matrix> {
    if x.cols() != model.n_features() {
        return Err(config_err!(
            "PCA fitted on {} features, input has {}",
            model.n_features(),
            x.cols()
        ));
    }
    let k = model.n_components();
    let mut out = Matrix::zeros(x.rows(), k);
    let mut centered = vec![0.0; x.cols()];
    for (i, row) in x.row_iter().enumerate() {
        for ((c, &v), &m) in centered.iter_mut().zip(row).zip(&model.mean) {
            *c = v - m;
        }
        let out_row = out.row_mut(i);
        for (j, &c) in centered.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (o, &w) in out_row.iter_mut().zip(model.components.row(j)) {
                *o += c * w;
            }
        }
    }
    Ok(out)
}

/// `Z · W_nᵀ + mean`.
pub fn inverse_transform_pca(model: &PcaModel, z: &Matrix) -> Result<Matrix> {
    if z.cols() != model.n_components() {
        return Err(config_err!(
            "PCA has {} components, input has {}",
            model.n_components(),
            z.cols()
        ));
    }
    let mut out = z.matmul(&model.components.transpose())?;
    for i in 0..out.rows() {
        for (v, &m) in out.row_mut(i).iter_mut().zip(&model.mean) {
            *v += m;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarianceRow {
    pub components: usize,
    pub ratio: f64,
    pub cumulative_percent: f64,
}

/// Running sum of explained-variance ratios, in percent.
pub fn cumulative_variance_report(model: &PcaModel) -> Vec<VarianceRow> {
    let mut cumulative = 0.0;
    model
        .explained_variance_ratio
        .iter()
        .enumerate()
        .map(|(k, &ratio)| {
            cumulative += ratio;
            VarianceRow {
                components: k + 1,
                ratio,
                cumulative_percent: cumulative * 100.0,
            }
        })
        .collect()
}
