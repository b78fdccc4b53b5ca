use qransom_core::baseline::{fit_logistic, loss_and_gradient, training_loss, LogisticConfig};
use qransom_core::linalg::Matrix;
use qransom_core::rng::Xorshift64Star;

fn blobs(n: usize, d: usize, gap: f64, seed: u64) -> (Matrix, Vec<u8>) {
    let mut rng = Xorshift64Star::new(seed);
    let y: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
    let data = (0..n * d)
        .map(|k| rng.normal() + if y[k / d] == 1 { gap / 2.0 } else { -gap / 2.0 })
        .collect();
    (Matrix::from_vec(n, d, data).unwrap(), y)
}

#[test]
fn gradient_matches_finite_differences() {
    let (x, y) = blobs(40, 4, 1.0, 3);
    let order: Vec<usize> = (0..40).collect();
    let w = [0.3, -0.2, 0.5, 0.1];
    let b = -0.4;
    let l2 = 0.05;
    let (_, gw, gb) = loss_and_gradient(&x, &y, &w, b, l2, &order);
    let h = 1e-6;
    for j in 0..4 {
        let (mut plus, mut minus) = (w, w);
        plus[j] += h;
        minus[j] -= h;
        let fd = (loss_and_gradient(&x, &y, &plus, b, l2, &order).0
            - loss_and_gradient(&x, &y, &minus, b, l2, &order).0)
            / (2.0 * h);
        assert!((fd - gw[j]).abs() < 1e-6, "w{j}: {fd} vs {}", gw[j]);
    }
    let fd = (loss_and_gradient(&x, &y, &w, b + h, l2, &order).0 - loss_and_gradient(&x, &y, &w, b - h, l2, &order).0)
        / (2.0 * h);
    assert!((fd - gb).abs() < 1e-6);
}

#[test]
fn row_order_does_not_change_the_fit() {
    let (x, y) = blobs(60, 3, 1.5, 4);
    let a = fit_logistic(
        &x,
        &y,
        &LogisticConfig {
            seed: 1,
            ..Default::default()
        },
    )
    .unwrap();
    let b = fit_logistic(
        &x,
        &y,
        &LogisticConfig {
            seed: 2,
            ..Default::default()
        },
    )
    .unwrap();
    for (p, q) in a.weights.iter().zip(&b.weights) {
        assert!((p - q).abs() < 1e-6);
    }
    assert!((a.bias - b.bias).abs() < 1e-6);
}

#[test]
fn training_reduces_loss_and_separates() {
    let (x, y) = blobs(200, 5, 3.0, 5);
    let model = fit_logistic(&x, &y, &LogisticConfig::default()).unwrap();
    assert_eq!(model.l2_strength, 1.0 / 200.0);
    let start = loss_and_gradient(&x, &y, &[0.0; 5], 0.0, model.l2_strength, &(0..200).collect::<Vec<_>>()).0;
    assert!(training_loss(&model, &x, &y).unwrap() < start);
    let correct = x
        .row_iter()
        .zip(&y)
        .filter(|(r, &l)| model.predict(r).unwrap() == l)
        .count();
    assert!(correct as f64 / 200.0 > 0.9);
}

#[test]
fn probability_is_monotone_along_the_weights() {
    let (x, y) = blobs(100, 2, 2.0, 6);
    let model = fit_logistic(&x, &y, &LogisticConfig::default()).unwrap();
    let norm = (model.weights[0].powi(2) + model.weights[1].powi(2)).sqrt();
    let dir = [model.weights[0] / norm, model.weights[1] / norm];
    let mut last = 0.0;
    for k in -20..=20 {
        let t = k as f64 * 0.5;
        let p = model.predict_proba(&[t * dir[0], t * dir[1]]).unwrap();
        assert!(p >= last && (0.0..=1.0).contains(&p));
        last = p;
    }
}

#[test]
fn single_class_rejected() {
    let x = Matrix::from_rows(&[[1.0], [2.0]]).unwrap();
    assert!(fit_logistic(&x, &[1, 1], &LogisticConfig::default()).is_err());
    assert!(fit_logistic(&x, &[0, 2], &LogisticConfig::default()).is_err());
}
