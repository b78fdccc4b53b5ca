//! Run configuration, read from TOML. Unknown keys are rejected.
//!
//! ```toml
//! seed = 42
//! output_dir = "results"
//!
//! [data]
//! train = "data/train.csv"
//! test = "data/test.csv"
//! label_column = "label"
//!
//! [vqc]
//! qubit_counts = [4, 8, 12]
//! budgets = [100, 80, 80]
//! ```

use std::path::{Path, PathBuf};

use qransom_core::baseline::LogisticConfig;
use qransom_core::circuits::{AnsatzSpec, FeatureMapSpec, PhaseConvention};
use qransom_core::optim::OptimizerConfig;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Rayon worker count; unset uses rayon's default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub data: DataConfig,
    pub synthetic: SyntheticConfig,
    pub preprocess: PreprocessConfig,
    pub vqc: VqcConfig,
    pub logistic: LogisticSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// Training CSV. With no paths the run uses synthetic data.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test: Option<PathBuf>,
    pub label_column: String,
    /// CSV of metric rows computed elsewhere (e.g. tree ensembles).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub external_baselines: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub n_samples: usize,
    pub n_features: usize,
    pub separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    pub standardize: bool,
    /// Without PCA the first `n` (scaled) columns feed an `n`-qubit model.
    pub pca: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VqcConfig {
    pub qubit_counts: Vec<usize>,
    /// Objective-evaluation budget per entry of `qubit_counts`.
    pub budgets: Vec<usize>,
    pub feature_map_reps: usize,
    pub ansatz_reps: usize,
    pub phase_convention: PhaseConvention,
    /// Multiplies every encoded coordinate before the feature map. 1.0
    /// feeds the PCA scores in unchanged.
    pub angle_scale: f64,
    pub rho_begin: f64,
    pub rho_end: f64,
    /// Estimate test scores from this many shots instead of exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogisticSection {
    /// Defaults to `1/N_train`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2_strength: Option<f64>,
    pub max_epochs: usize,
    pub learning_rate: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            output_dir: PathBuf::from("results"),
            threads: None,
            data: DataConfig::default(),
            synthetic: SyntheticConfig::default(),
            preprocess: PreprocessConfig::default(),
            vqc: VqcConfig::default(),
            logistic: LogisticSection::default(),
        }
    }
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            train: None,
            test: None,
            label_column: "label".into(),
            external_baselines: None,
        }
    }
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_samples: 500,
            n_features: 16,
            separation: 6.0,
        }
    }
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            standardize: true,
            pca: true,
        }
    }
}

impl Default for VqcConfig {
    fn default() -> Self {
        let opt = OptimizerConfig::default();
        Self {
            qubit_counts: vec![4, 8, 12],
            budgets: vec![100, 80, 80],
            feature_map_reps: FeatureMapSpec::DEFAULT_REPS,
            ansatz_reps: AnsatzSpec::DEFAULT_REPS,
            phase_convention: PhaseConvention::Paper,
            angle_scale: 1.0,
            rho_begin: opt.rho_begin,
            rho_end: opt.rho_end,
            shots: None,
        }
    }
}

impl Default for LogisticSection {
    fn default() -> Self {
        let d = LogisticConfig::default();
        Self {
            l2_strength: d.l2_strength,
            max_epochs: d.max_epochs,
            learning_rate: d.learning_rate,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            HarnessError::Config(m) => HarnessError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("RunConfig always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let v = &self.vqc;
        if v.qubit_counts.len() != v.budgets.len() {
            return Err(HarnessError::Config(format!(
                "{} qubit counts but {} budgets",
                v.qubit_counts.len(),
                v.budgets.len()
            )));
        }
        let mut seen = v.qubit_counts.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != v.qubit_counts.len() {
            return Err(HarnessError::Config("qubit_counts contains duplicates".into()));
        }
        if v.qubit_counts
            .iter()
            .any(|&n| n == 0 || n > qransom_core::qsim::MAX_QUBITS)
        {
            return Err(HarnessError::Config(format!(
                "qubit counts must be in 1..={}",
                qransom_core::qsim::MAX_QUBITS
            )));
        }
        if v.feature_map_reps == 0 || v.ansatz_reps == 0 {
            return Err(HarnessError::Config("circuit reps must be at least 1".into()));
        }
        if !(v.angle_scale > 0.0 && v.angle_scale.is_finite()) {
            return Err(HarnessError::Config(format!(
                "angle_scale must be positive and finite, got {}",
                v.angle_scale
            )));
        }
        if v.shots == Some(0) {
            return Err(HarnessError::Config("shots must be at least 1".into()));
        }
        for &budget in &v.budgets {
            self.optimizer(budget).validate()?;
        }
        if self.threads == Some(0) {
            return Err(HarnessError::Config("threads must be at least 1".into()));
        }
        if self.data.train.is_some() != self.data.test.is_some() {
            return Err(HarnessError::Config(
                "data.train and data.test must be given together".into(),
            ));
        }
        if self.logistic.max_epochs == 0 {
            return Err(HarnessError::Config("logistic.max_epochs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn optimizer(&self, budget: usize) -> OptimizerConfig {
        OptimizerConfig {
            max_evaluations: budget,
            rho_begin: self.vqc.rho_begin,
            rho_end: self.vqc.rho_end,
            seed: self.seed,
        }
    }

    pub fn logistic_config(&self) -> LogisticConfig {
        LogisticConfig {
            l2_strength: self.logistic.l2_strength,
            max_epochs: self.logistic.max_epochs,
            learning_rate: self.logistic.learning_rate,
            seed: self.seed,
        }
    }

    /// `(qubits, budget)` pairs in sweep order.
    pub fn sweep(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vqc
            .qubit_counts
            .iter()
            .copied()
            .zip(self.vqc.budgets.iter().copied())
    }
}

/// Budget used when qubit counts are given without budgets: 100
/// evaluations up to 4 qubits, 80 above.
pub fn default_budget(n_qubits: usize) -> usize {
    if n_qubits <= 4 {
        100
    } else {
        80
    }
}

/// Parses `4,8,12`.
pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| HarnessError::Config(format!("'{s}' is not a non-negative integer")))
        })
        .collect()
}
