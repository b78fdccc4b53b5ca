//! The run report and the files rendered from it.
//!
//! `report.json` carries everything, including wall-clock timings. The CSV
//! files hold only values that are deterministic given the configuration
//! and inputs, so two runs with the same seed produce identical CSVs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qransom_core::metrics::{ConfusionCounts, Evaluation, PositiveDirection, RocPoint};
use qransom_core::optim::Termination;
use qransom_core::preprocess::ScalerModel;
use qransom_core::vqc::CostRecord;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::dataset::RejectedRow;
use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: u64,
    pub dataset: DatasetInfo,
    /// Fully resolved configuration, after flag overrides.
    pub config: RunConfig,
    /// One row per model; recall leads the CSV columns.
    pub metrics: Vec<MetricRow>,
    /// Cumulative explained variance, one row per qubit count.
    pub pca_variance: Vec<VarianceEntry>,
    pub recall_vs_qubits: Vec<RecallPoint>,
    pub qubit_runs: Vec<QubitRun>,
    pub roc: Vec<RocSeries>,
    /// Training-set statistics; these must never depend on test rows.
    pub fitted: FittedSummary,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub provenance: Provenance,
    pub n_features: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub train_positives: usize,
    pub test_positives: usize,
    pub rejected_train: Vec<RejectedRow>,
    pub rejected_test: Vec<RejectedRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    Synthetic {
        n_samples: usize,
        n_features: usize,
        separation: f64,
        seed: u64,
    },
    Csv {
        train: PathBuf,
        test: PathBuf,
        label_column: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Classical,
    Hybrid,
    /// Imported from an external results file.
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

/// One model on the test set. Rates are fractions in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub model: String,
    pub stage: Stage,
    pub n_qubits: Option<usize>,
    pub seed: Option<u64>,
    pub status: RunStatus,
    pub recall: Option<f64>,
    pub precision: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
    pub auc: Option<f64>,
    pub counts: Option<ConfusionCounts>,
    pub precision_undefined: bool,
    pub error: Option<String>,
}

impl MetricRow {
    pub fn from_evaluation(model: &str, stage: Stage, n_qubits: Option<usize>, seed: u64, e: &Evaluation) -> Self {
        Self {
            model: model.to_string(),
            stage,
            n_qubits,
            seed: Some(seed),
            status: RunStatus::Ok,
            recall: Some(e.summary.recall),
            precision: Some(e.summary.precision),
            f1: Some(e.summary.f1),
            accuracy: Some(e.summary.accuracy),
            auc: Some(e.roc.auc),
            counts: Some(e.counts),
            precision_undefined: e.summary.precision_undefined,
            error: None,
        }
    }

    pub fn failed(model: &str, stage: Stage, n_qubits: Option<usize>, seed: u64, error: String) -> Self {
        Self {
            model: model.to_string(),
            stage,
            n_qubits,
            seed: Some(seed),
            status: RunStatus::Failed,
            recall: None,
            precision: None,
            f1: None,
            accuracy: None,
            auc: None,
            counts: None,
            precision_undefined: false,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceEntry {
    pub n_components: usize,
    pub cumulative_percent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecallPoint {
    pub n_qubits: usize,
    pub recall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitRun {
    pub n_qubits: usize,
    pub budget: usize,
    pub status: RunStatus,
    pub error: Option<String>,
    /// Key-value description of the circuit that was trained.
    pub circuit: String,
    pub parameter_count: usize,
    pub explained_variance: Vec<f64>,
    pub cost_history: Vec<CostRecord>,
    pub evaluations_used: usize,
    pub termination: Option<Termination>,
    pub converged: bool,
    pub best_cost: Option<f64>,
    pub initial_theta: Vec<f64>,
    pub final_theta: Vec<f64>,
    /// `exact` or `shots=N`.
    pub score_mode: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocSeries {
    pub model: String,
    pub direction: PositiveDirection,
    pub auc: f64,
    pub points: Vec<RocPoint>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FittedSummary {
    pub scaler: Option<ScalerModel>,
    /// `(n_components, explained variances)` per PCA fit.
    pub pca: Vec<(usize, Vec<f64>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub classical_seconds: f64,
    pub hybrid_seconds: f64,
}

impl RunReport {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let report: RunReport = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: not a run report: {e}", path.display())))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Config(format!(
                "{}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                path.display(),
                report.schema_version
            )));
        }
        Ok(report)
    }

    pub fn is_empty(&self) -> bool {
        self.metrics.is_empty() && self.qubit_runs.is_empty()
    }
}

/// Rounds half away from zero to `decimals` places and formats.
pub fn fixed(value: f64, decimals: i32) -> String {
    let scale = 10f64.powi(decimals);
    format!("{:.*}", decimals as usize, (value * scale).round() / scale)
}

/// A fraction as a percentage with two decimals, e.g. `0.97656 → 97.66`.
pub fn percent(fraction: f64) -> String {
    fixed(fraction * 100.0, 2)
}

fn opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map(f).unwrap_or_default()
}

/// Characters safe for a file name; everything else becomes `_`.
pub fn file_stem(model: &str) -> String {
    model
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

/// Renders every output file in memory: `(file name, contents)`.
pub fn render_files(report: &RunReport) -> Result<Vec<(String, String)>> {
    if report.is_empty() {
        return Err(HarnessError::Runtime(
            "empty run: no metric rows or qubit runs to report".into(),
        ));
    }
    let mut files = Vec::new();
    let json = serde_json::to_string_pretty(report).map_err(|e| HarnessError::Runtime(format!("report.json: {e}")))?;
    files.push(("report.json".to_string(), json + "\n"));

    let mut m =
        String::from("model,stage,n_qubits,status,recall,precision,f1,accuracy,auc,tp,fp,tn,fn,precision_undefined\n");
    for r in &report.metrics {
        let stage = match r.stage {
            Stage::Classical => "classical",
            Stage::Hybrid => "hybrid",
            Stage::External => "external",
        };
        let status = match r.status {
            RunStatus::Ok => "ok",
            RunStatus::Failed => "failed",
        };
        let counts = match r.counts {
            Some(c) => format!("{},{},{},{}", c.tp, c.fp, c.tn, c.fn_),
            None => ",,,".into(),
        };
        let _ = writeln!(
            m,
            "{},{stage},{},{status},{},{},{},{},{},{counts},{}",
            csv_field(&r.model),
            r.n_qubits.map(|n| n.to_string()).unwrap_or_default(),
            opt(r.recall, percent),
            opt(r.precision, percent),
            opt(r.f1, percent),
            opt(r.accuracy, percent),
            opt(r.auc, |a| fixed(a, 4)),
            r.precision_undefined,
        );
    }
    files.push(("metrics.csv".into(), m));

    let mut v = String::from("n_components,cumulative_variance_percent\n");
    for e in &report.pca_variance {
        let _ = writeln!(v, "{},{}", e.n_components, fixed(e.cumulative_percent, 2));
    }
    files.push(("pca_variance.csv".into(), v));

    for series in &report.roc {
        let mut r = String::from("fpr,tpr,threshold\n");
        for p in &series.points {
            let _ = writeln!(
                r,
                "{},{},{}",
                p.fpr,
                p.tpr,
                p.threshold.map(|t| t.to_string()).unwrap_or_default()
            );
        }
        files.push((format!("roc_{}.csv", file_stem(&series.model)), r));
    }

    let mut rq = String::from("n_qubits,recall_percent,status\n");
    for p in &report.recall_vs_qubits {
        let status = if p.recall.is_some() { "ok" } else { "failed" };
        let _ = writeln!(rq, "{},{},{status}", p.n_qubits, opt(p.recall, percent));
    }
    files.push(("recall_vs_qubits.csv".into(), rq));

    for run in report.qubit_runs.iter().filter(|r| r.status == RunStatus::Ok) {
        let mut c = String::from("iteration,cost,best_so_far\n");
        let mut best = f64::INFINITY;
        for rec in &run.cost_history {
            best = best.min(rec.cost);
            let _ = writeln!(c, "{},{},{}", rec.iteration, rec.cost, best);
        }
        files.push((format!("cost_history_{}q.csv", run.n_qubits), c));
    }
    Ok(files)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes the rendered files into `out_dir`, creating it if needed. The
/// directory is checked for writability before the first output file is
/// touched.
pub fn emit_report(report: &RunReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let files = render_files(report)?;
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    let probe = out_dir.join(".qransom-write-probe");
    std::fs::write(&probe, b"").map_err(|e| HarnessError::io(out_dir, e))?;
    std::fs::remove_file(&probe).map_err(|e| HarnessError::io(&probe, e))?;
    let mut written = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, contents).map_err(|e| HarnessError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
