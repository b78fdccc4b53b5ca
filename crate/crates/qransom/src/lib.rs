//! Experiment harness for the hybrid quantum-classical ransomware
//! classifier: CSV ingestion, synthetic data, TOML configuration, the
//! classical and qubit-sweep stages, text model files and report output.
//!
//! The numerics live in [`qransom_core`].

pub mod config;
pub mod dataset;
pub mod error;
pub mod model_file;
pub mod parallel;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use error::{HarnessError, Result};

use std::path::{Path, PathBuf};

/// Writes every fitted model in `artifacts` as a text model file.
pub fn save_models(artifacts: &pipeline::Artifacts, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut docs = Vec::new();
    if let Some(s) = &artifacts.scaler {
        docs.push(("scaler.model".to_string(), model_file::scaler_doc(s)));
    }
    if let Some(l) = &artifacts.logistic {
        docs.push(("logistic.model".to_string(), model_file::logistic_doc(l)));
    }
    for q in &artifacts.qubit_models {
        if let Some(p) = &q.pca {
            docs.push((format!("pca_{}.model", q.n_qubits), model_file::pca_doc(p)));
        }
        docs.push((format!("vqc_{}q.model", q.n_qubits), model_file::vqc_doc(&q.vqc)));
    }
    docs.into_iter()
        .map(|(name, doc)| {
            let path = dir.join(name);
            doc.write(&path)?;
            Ok(path)
        })
        .collect()
}
