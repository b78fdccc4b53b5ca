use nalgebra::{DMatrix, SymmetricEigen};
use qransom_core::linalg::Matrix;
use qransom_core::preprocess::{
    cumulative_variance_report, fit_pca, fit_pca_with, fit_scaler, inverse_transform_pca, transform_pca,
    transform_scaler, PcaSolver,
};
use qransom_core::rng::Xorshift64Star;

fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = Xorshift64Star::new(seed);
    // correlated columns with distinct scales so the spectrum is spread out
    let base: Vec<f64> = (0..rows * cols).map(|_| rng.normal()).collect();
    let mut data = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let mut v = base[i * cols + j] * (1.0 + j as f64);
            if j > 0 {
                v += 0.5 * base[i * cols + j - 1];
            }
            data[i * cols + j] = v;
        }
    }
    Matrix::from_vec(rows, cols, data).unwrap()
}

fn nalgebra_spectrum(x: &Matrix) -> (Vec<f64>, DMatrix<f64>) {
    let (n, d) = (x.rows(), x.cols());
    let m = DMatrix::from_row_slice(n, d, x.as_slice());
    let mean = m.row_mean();
    let centered = DMatrix::from_fn(n, d, |i, j| m[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

#[test]
fn matches_nalgebra_eigendecomposition() {
    for (n, d, seed) in [(40, 3, 1), (100, 10, 2), (200, 25, 3), (120, 50, 4)] {
        let x = random_matrix(n, d, seed);
        let k = d.min(8);
        let model = fit_pca_with(&x, k, PcaSolver::Covariance).unwrap();
        let (values, vectors) = nalgebra_spectrum(&x);
        let scale = values[0];
        for c in 0..k {
            assert!(
                (model.explained_variance[c] - values[c]).abs() < 1e-8 * scale,
                "D={d} c={c}"
            );
            // eigenvectors agree up to sign
            let ours = model.components.column(c);
            let dot: f64 = (0..d).map(|r| ours[r] * vectors[(r, c)]).sum();
            assert!(
                (dot.abs() - 1.0).abs() < 1e-8,
                "D={d} component {c}: |dot| = {}",
                dot.abs()
            );
        }
        let total: f64 = values.iter().sum();
        assert!((model.total_variance - total).abs() < 1e-8 * total);
    }
}

#[test]
fn components_orthonormal_and_sign_fixed() {
    let x = random_matrix(80, 12, 9);
    let model = fit_pca(&x, 6).unwrap();
    let w = &model.components;
    for a in 0..6 {
        let ca = w.column(a);
        for b in 0..6 {
            let dot: f64 = ca.iter().zip(w.column(b)).map(|(p, q)| p * q).sum();
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((dot - expected).abs() < 1e-10);
        }
        let largest = ca
            .iter()
            .copied()
            .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        assert!(largest > 0.0);
    }
    assert!(model.explained_variance.windows(2).all(|p| p[0] >= p[1]));
}

#[test]
fn full_rank_round_trip() {
    let x = random_matrix(30, 5, 5);
    let model = fit_pca(&x, 5).unwrap();
    let back = inverse_transform_pca(&model, &transform_pca(&model, &x).unwrap()).unwrap();
    assert!(back.max_abs_diff(&x) < 1e-10);
}

#[test]
fn gram_and_covariance_solvers_agree() {
    // more features than rows puts Auto on the Gram path
    let x = random_matrix(12, 30, 6);
    let cov = fit_pca_with(&x, 5, PcaSolver::Covariance).unwrap();
    let gram = fit_pca_with(&x, 5, PcaSolver::Gram).unwrap();
    let auto = fit_pca(&x, 5).unwrap();
    for c in 0..5 {
        assert!((cov.explained_variance[c] - gram.explained_variance[c]).abs() < 1e-8 * cov.explained_variance[0]);
    }
    assert!(cov.components.max_abs_diff(&gram.components) < 1e-8);
    assert_eq!(auto, gram);
}

#[test]
fn first_component_maximizes_variance_on_a_grid() {
    // 6 × 4 data; search the unit sphere in 4 dimensions on a coarse
    // angular grid and make sure nothing beats the first component
    let x = Matrix::from_rows(&[
        [2.0, 0.5, -1.0, 0.3],
        [1.2, -0.7, 0.4, 1.1],
        [-0.8, 1.5, 0.9, -0.6],
        [0.1, -1.9, 1.3, 0.2],
        [-1.6, 0.4, -0.7, -1.4],
        [0.7, 0.2, -0.5, 0.9],
    ])
    .unwrap();
    let model = fit_pca(&x, 1).unwrap();
    let means = x.column_means();
    let variance_along = |u: &[f64]| {
        let s: f64 = x
            .row_iter()
            .map(|r| {
                let p: f64 = r.iter().zip(&means).zip(u).map(|((v, m), w)| (v - m) * w).sum();
                p * p
            })
            .sum();
        s / 5.0
    };
    let best = model.explained_variance[0];
    assert!((variance_along(&model.components.column(0)) - best).abs() < 1e-10);
    let steps = 40;
    let mut grid_best: f64 = 0.0;
    for a in 0..steps {
        for b in 0..steps {
            for c in 0..2 * steps {
                let (t1, t2, t3) = (
                    std::f64::consts::PI * a as f64 / steps as f64,
                    std::f64::consts::PI * b as f64 / steps as f64,
                    std::f64::consts::PI * c as f64 / steps as f64,
                );
                let u = [
                    t1.cos(),
                    t1.sin() * t2.cos(),
                    t1.sin() * t2.sin() * t3.cos(),
                    t1.sin() * t2.sin() * t3.sin(),
                ];
                grid_best = grid_best.max(variance_along(&u));
            }
        }
    }
    assert!(grid_best <= best + 1e-12);
    assert!(best - grid_best < 1e-3 * best.max(1.0), "grid {grid_best} vs {best}");
}

#[test]
fn isotropic_data_has_flat_spectrum() {
    let mut rng = Xorshift64Star::new(77);
    let data: Vec<f64> = (0..10_000 * 2).map(|_| rng.normal()).collect();
    let x = Matrix::from_vec(10_000, 2, data).unwrap();
    let model = fit_pca(&x, 2).unwrap();
    for r in &model.explained_variance_ratio {
        assert!((r - 0.5).abs() < 0.1);
    }
}

#[test]
fn cumulative_report_is_monotone_and_ends_at_total() {
    let x = random_matrix(50, 6, 12);
    let model = fit_pca(&x, 6).unwrap();
    let rows = cumulative_variance_report(&model);
    assert_eq!(rows.len(), 6);
    assert!(rows
        .windows(2)
        .all(|w| w[1].cumulative_percent >= w[0].cumulative_percent));
    assert!((rows[5].cumulative_percent - 100.0).abs() < 1e-9);
}

#[test]
fn scaler_uses_training_statistics_only() {
    let train = random_matrix(20, 3, 1);
    let test = random_matrix(5, 3, 2);
    let scaler = fit_scaler(&train).unwrap();
    let z = transform_scaler(&scaler, &train).unwrap();
    for j in 0..3 {
        let col = z.column(j);
        let mean = col.iter().sum::<f64>() / 20.0;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 20.0;
        assert!(mean.abs() < 1e-12 && (var - 1.0).abs() < 1e-12);
    }
    let mut shifted = test.clone();
    shifted.row_mut(0)[0] += 1000.0;
    let _ = transform_scaler(&scaler, &shifted).unwrap();
    assert_eq!(fit_scaler(&train).unwrap(), scaler);
}
