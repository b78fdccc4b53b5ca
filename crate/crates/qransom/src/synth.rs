//! Seeded two-blob data for desk-scale runs.

use qransom_core::linalg::Matrix;
use qransom_core::rng::Xorshift64Star;

use crate::dataset::{Dataset, Split};
use crate::error::{HarnessError, Result};

/// Fraction of each class that goes to the training split.
pub const TRAIN_FRACTION: f64 = 0.8;

/// Two unit-variance isotropic Gaussians whose means sit `class_separation`
/// apart along the all-ones diagonal, so every feature carries part of the
/// signal. Half the samples are ransomware. The split is stratified 80/20
/// and both halves are shuffled.
pub fn synth_dataset(
    n_samples: usize,
    n_features: usize,
    class_separation: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if n_features < 2 {
        return Err(HarnessError::Config(format!(
            "synthetic data needs at least 2 features, got {n_features}"
        )));
    }
    if n_samples < 10 {
        return Err(HarnessError::Config(format!(
            "synthetic data needs at least 10 samples, got {n_samples}"
        )));
    }
    if !(class_separation >= 0.0 && class_separation.is_finite()) {
        return Err(HarnessError::Config(format!(
            "class separation must be finite and non-negative, got {class_separation}"
        )));
    }

    let mut rng = Xorshift64Star::new(seed);
    let shift = class_separation / 2.0 / (n_features as f64).sqrt();
    let mut x = Matrix::zeros(n_samples, n_features);
    let y: Vec<u8> = (0..n_samples).map(|i| (i % 2) as u8).collect();
    for (i, &label) in y.iter().enumerate() {
        let sign = if label == 1 { 1.0 } else { -1.0 };
        for v in x.row_mut(i) {
            *v = rng.normal() + sign * shift;
        }
    }

    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in 0..2u8 {
        let mut members: Vec<usize> = (0..n_samples).filter(|&i| y[i] == class).collect();
        rng.shuffle(&mut members);
        let cut = (members.len() as f64 * TRAIN_FRACTION).round() as usize;
        train_idx.extend_from_slice(&members[..cut]);
        test_idx.extend_from_slice(&members[cut..]);
    }
    rng.shuffle(&mut train_idx);
    rng.shuffle(&mut test_idx);

    let names: Vec<String> = (0..n_features).map(|j| format!("f{j}")).collect();
    let build = |idx: &[usize], split| {
        Dataset::new(
            x.select_rows(idx),
            idx.iter().map(|&i| y[i]).collect(),
            split,
            names.clone(),
        )
    };
    Ok((build(&train_idx, Split::Train)?, build(&test_idx, Split::Test)?))
}
