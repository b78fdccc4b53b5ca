#![allow(dead_code)]

use qransom::config::RunConfig;
use qransom::dataset::Dataset;
use qransom::pipeline::{run_experiment, Stages};
use qransom::report::{Provenance, RunReport};
use qransom_core::exec::Sequential;

/// A quick synthetic configuration: 200 rows, 4 features, a 2- and
/// 3-qubit sweep on small budgets.
pub fn small_config() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.synthetic.n_samples = 200;
    cfg.synthetic.n_features = 4;
    cfg.vqc.qubit_counts = vec![2, 3];
    cfg.vqc.budgets = vec![30, 30];
    cfg.vqc.feature_map_reps = 1;
    cfg.vqc.ansatz_reps = 1;
    cfg
}

pub fn synthetic(cfg: &RunConfig) -> (Dataset, Dataset, Provenance) {
    qransom::pipeline::load_data(cfg).unwrap()
}

pub fn run(cfg: &RunConfig, train: &Dataset, test: &Dataset) -> RunReport {
    let prov = Provenance::Synthetic {
        n_samples: train.len() + test.len(),
        n_features: train.n_features(),
        separation: cfg.synthetic.separation,
        seed: cfg.seed,
    };
    run_experiment(cfg, Stages::All, train, test, prov, &Sequential)
        .unwrap()
        .0
}

pub fn write(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}
