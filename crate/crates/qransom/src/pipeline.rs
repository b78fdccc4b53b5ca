//! The two-stage experiment: a classical baseline on all features, then a
//! sweep of variational classifiers on PCA-reduced features.

use std::path::Path;
use std::time::Instant;

use qransom_core::baseline::{fit_logistic, LogisticModel};
use qransom_core::circuits::{AnsatzSpec, FeatureMapSpec};
use qransom_core::exec::{Executor, WallClock};
use qransom_core::linalg::Matrix;
use qransom_core::metrics::{evaluate, PositiveDirection};
use qransom_core::preprocess::{
    cumulative_variance_report, fit_pca, fit_scaler, transform_pca, transform_scaler, PcaModel, ScalerModel,
};
use qransom_core::vqc::{self, class_from_score, TrainLog, VqcModel, VqcShape};
use serde::Deserialize;

use crate::config::RunConfig;
use crate::dataset::{ingest_csv, Dataset};
use crate::error::{HarnessError, Result};
use crate::report::{
    DatasetInfo, FittedSummary, MetricRow, Provenance, QubitRun, RecallPoint, RocSeries, RunReport, RunStatus, Stage,
    Timings, VarianceEntry, SCHEMA_VERSION,
};
use crate::synth::synth_dataset;

pub const LOGISTIC_MODEL: &str = "logistic_regression";

pub fn vqc_model_name(n_qubits: usize) -> String {
    format!("vqc_{n_qubits}q")
}

/// Loads the configured CSV pair, or generates synthetic data when no
/// paths are set.
pub fn load_data(cfg: &RunConfig) -> Result<(Dataset, Dataset, Provenance)> {
    match (&cfg.data.train, &cfg.data.test) {
        (Some(train), Some(test)) => {
            let (tr, te) = ingest_csv(train, test, &cfg.data.label_column)?;
            let prov = Provenance::Csv {
                train: train.clone(),
                test: test.clone(),
                label_column: cfg.data.label_column.clone(),
            };
            Ok((tr, te, prov))
        }
        (None, None) => {
            let s = &cfg.synthetic;
            let (tr, te) = synth_dataset(s.n_samples, s.n_features, s.separation, cfg.seed)?;
            let prov = Provenance::Synthetic {
                n_samples: s.n_samples,
                n_features: s.n_features,
                separation: s.separation,
                seed: cfg.seed,
            };
            Ok((tr, te, prov))
        }
        _ => Err(HarnessError::Config(
            "data.train and data.test must be given together".into(),
        )),
    }
}

fn check_splits(train: &Dataset, test: &Dataset) -> Result<()> {
    if train.n_features() != test.n_features() {
        return Err(HarnessError::Ingestion(format!(
            "train has {} features, test has {}",
            train.n_features(),
            test.n_features()
        )));
    }
    for d in [train, test] {
        let pos = d.positives();
        if pos == 0 || pos == d.len() {
            return Err(HarnessError::Ingestion(format!(
                "{} split has only one class ({pos} ransomware of {})",
                d.split,
                d.len()
            )));
        }
    }
    Ok(())
}

/// Fits the scaler on training rows (when enabled) and applies it to both
/// splits.
pub fn scale(cfg: &RunConfig, train: &Dataset, test: &Dataset) -> Result<(Option<ScalerModel>, Matrix, Matrix)> {
    if !cfg.preprocess.standardize {
        return Ok((None, train.x.clone(), test.x.clone()));
    }
    let scaler = fit_scaler(&train.x)?;
    let tr = transform_scaler(&scaler, &train.x)?;
    let te = transform_scaler(&scaler, &test.x)?;
    Ok((Some(scaler), tr, te))
}

#[derive(Debug, Clone)]
pub struct ClassicalOutcome {
    pub rows: Vec<MetricRow>,
    pub roc: Vec<RocSeries>,
    pub scaler: Option<ScalerModel>,
    pub logistic: LogisticModel,
    pub seconds: f64,
}

/// Row of an externally computed results file.
#[derive(Debug, Deserialize)]
struct ExternalRow {
    model: String,
    accuracy: f64,
    precision: f64,
    recall: f64,
    f1: f64,
    auc: Option<f64>,
}

/// Reads metric rows computed by other tools. Columns are `model`, then
/// `accuracy,precision,recall,f1` in percent and an optional `auc` in
/// `[0, 1]`. A missing file yields no rows.
pub fn read_external_baselines(path: &Path) -> Result<Vec<MetricRow>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for rec in reader.deserialize::<ExternalRow>() {
        let r = rec.map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        rows.push(MetricRow {
            model: r.model,
            stage: Stage::External,
            n_qubits: None,
            seed: None,
            status: RunStatus::Ok,
            recall: Some(r.recall / 100.0),
            precision: Some(r.precision / 100.0),
            f1: Some(r.f1 / 100.0),
            accuracy: Some(r.accuracy / 100.0),
            auc: r.auc,
            counts: None,
            precision_undefined: false,
            error: None,
        });
    }
    Ok(rows)
}

/// Standardize, fit logistic regression on every feature, score the test
/// split, then append any external baseline rows.
pub fn run_classical_stage(cfg: &RunConfig, train: &Dataset, test: &Dataset) -> Result<ClassicalOutcome> {
    let started = Instant::now();
    check_splits(train, test)?;
    let (scaler, x_train, x_test) = scale(cfg, train, test)?;
    let logistic = fit_logistic(&x_train, &train.y, &cfg.logistic_config())?;
    let probs = logistic.predict_proba_batch(&x_test)?;
    let preds = x_test
        .row_iter()
        .map(|r| logistic.predict(r))
        .collect::<qransom_core::Result<Vec<u8>>>()?;
    let eval = evaluate(&test.y, &preds, &probs, PositiveDirection::Higher)?;
    let mut rows = vec![MetricRow::from_evaluation(
        LOGISTIC_MODEL,
        Stage::Classical,
        None,
        cfg.seed,
        &eval,
    )];
    if let Some(path) = &cfg.data.external_baselines {
        rows.extend(read_external_baselines(path)?);
    }
    Ok(ClassicalOutcome {
        rows,
        roc: vec![RocSeries {
            model: LOGISTIC_MODEL.into(),
            direction: PositiveDirection::Higher,
            auc: eval.roc.auc,
            points: eval.roc.points,
        }],
        scaler,
        logistic,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Everything fitted for one qubit count.
#[derive(Debug, Clone)]
pub struct QubitModels {
    pub n_qubits: usize,
    pub pca: Option<PcaModel>,
    pub vqc: VqcModel,
    pub log: TrainLog,
}

#[derive(Debug, Clone)]
pub struct HybridOutcome {
    pub runs: Vec<QubitRun>,
    pub rows: Vec<MetricRow>,
    pub roc: Vec<RocSeries>,
    pub variance: Vec<VarianceEntry>,
    pub recall: Vec<RecallPoint>,
    pub scaler: Option<ScalerModel>,
    pub models: Vec<QubitModels>,
    pub seconds: f64,
}

struct QubitSuccess {
    run: QubitRun,
    row: MetricRow,
    roc: RocSeries,
    variance: Option<VarianceEntry>,
    models: QubitModels,
}

fn scaled(m: Matrix, factor: f64) -> Result<Matrix> {
    if factor == 1.0 {
        return Ok(m);
    }
    let data = m.as_slice().iter().map(|v| v * factor).collect();
    Ok(Matrix::from_vec(m.rows(), m.cols(), data)?)
}

fn circuit_description(shape: &VqcShape, angle_scale: f64) -> String {
    format!(
        "n_qubits={} angle_scale={angle_scale} feature_map=zz reps={} phase_convention={} pairs=all ansatz=real_amplitudes reps={} entanglement=linear observable=z{}",
        shape.n_qubits(),
        shape.feature_map.reps(),
        shape.feature_map.convention().as_str(),
        shape.ansatz.reps(),
        shape.observable.qubit,
    )
}

#[allow(clippy::too_many_arguments)]
fn run_one_count<E: Executor>(
    cfg: &RunConfig,
    n: usize,
    budget: usize,
    x_train: &Matrix,
    x_test: &Matrix,
    train: &Dataset,
    test: &Dataset,
    exec: &E,
) -> Result<QubitSuccess> {
    let started = Instant::now();
    let d = x_train.cols();
    if n > d {
        return Err(HarnessError::Config(format!(
            "{n} qubits need at least {n} features, data has {d}"
        )));
    }
    let (pca, z_train, z_test) = if cfg.preprocess.pca {
        if n > x_train.rows() {
            return Err(HarnessError::Config(format!(
                "{n} components need at least {n} training rows, have {}",
                x_train.rows()
            )));
        }
        let pca = fit_pca(x_train, n)?;
        let zt = transform_pca(&pca, x_train)?;
        let ze = transform_pca(&pca, x_test)?;
        (Some(pca), zt, ze)
    } else {
        let cols: Vec<usize> = (0..n).collect();
        let pick = |m: &Matrix| {
            let data: Vec<f64> = m.row_iter().flat_map(|r| cols.iter().map(move |&j| r[j])).collect();
            Matrix::from_vec(m.rows(), n, data)
        };
        (None, pick(x_train)?, pick(x_test)?)
    };
    let (z_train, z_test) = (
        scaled(z_train, cfg.vqc.angle_scale)?,
        scaled(z_test, cfg.vqc.angle_scale)?,
    );

    let shape = VqcShape::new(
        FeatureMapSpec::new(n, cfg.vqc.feature_map_reps, cfg.vqc.phase_convention)?,
        AnsatzSpec::new(n, cfg.vqc.ansatz_reps)?,
    )?;
    let clock = WallClock::start();
    let (model, log) = vqc::train(
        &shape,
        &z_train,
        &train.y,
        &cfg.optimizer(budget),
        cfg.seed,
        exec,
        &clock,
    )?;

    let (scores, score_mode) = match cfg.vqc.shots {
        None => (model.scores(&z_test, exec)?, "exact".to_string()),
        Some(shots) => (
            model.sampled_scores(&z_test, shots, cfg.seed, exec)?,
            format!("shots={shots}"),
        ),
    };
    let preds: Vec<u8> = scores.iter().map(|&s| class_from_score(s)).collect();
    let eval = evaluate(&test.y, &preds, &scores, PositiveDirection::Lower)?;
    let name = vqc_model_name(n);

    let variance = pca.as_ref().map(|p| VarianceEntry {
        n_components: n,
        cumulative_percent: cumulative_variance_report(p)
            .last()
            .map_or(0.0, |r| r.cumulative_percent),
    });
    let run = QubitRun {
        n_qubits: n,
        budget,
        status: RunStatus::Ok,
        error: None,
        circuit: circuit_description(&shape, cfg.vqc.angle_scale),
        parameter_count: shape.parameter_count(),
        explained_variance: pca.as_ref().map(|p| p.explained_variance.clone()).unwrap_or_default(),
        cost_history: log.cost_history.clone(),
        evaluations_used: log.evaluations_used,
        termination: Some(log.termination),
        converged: log.converged,
        best_cost: Some(log.best_cost),
        initial_theta: log.initial_theta.clone(),
        final_theta: log.final_theta.clone(),
        score_mode,
        seconds: started.elapsed().as_secs_f64(),
    };
    Ok(QubitSuccess {
        run,
        row: MetricRow::from_evaluation(&name, Stage::Hybrid, Some(n), cfg.seed, &eval),
        roc: RocSeries {
            model: name,
            direction: PositiveDirection::Lower,
            auc: eval.roc.auc,
            points: eval.roc.points,
        },
        variance,
        models: QubitModels {
            n_qubits: n,
            pca,
            vqc: model,
            log,
        },
    })
}

/// For each qubit count: PCA to `n` components on the scaled training
/// rows, train a VQC under that count's budget, evaluate on test. A count
/// that fails is recorded with its error and the sweep moves on.
pub fn run_hybrid_stage<E: Executor>(
    cfg: &RunConfig,
    train: &Dataset,
    test: &Dataset,
    exec: &E,
) -> Result<HybridOutcome> {
    let started = Instant::now();
    check_splits(train, test)?;
    let (scaler, x_train, x_test) = scale(cfg, train, test)?;
    let mut out = HybridOutcome {
        runs: Vec::new(),
        rows: Vec::new(),
        roc: Vec::new(),
        variance: Vec::new(),
        recall: Vec::new(),
        scaler,
        models: Vec::new(),
        seconds: 0.0,
    };
    for (n, budget) in cfg.sweep() {
        match run_one_count(cfg, n, budget, &x_train, &x_test, train, test, exec) {
            Ok(s) => {
                out.recall.push(RecallPoint {
                    n_qubits: n,
                    recall: s.row.recall,
                });
                out.runs.push(s.run);
                out.rows.push(s.row);
                out.roc.push(s.roc);
                out.variance.extend(s.variance);
                out.models.push(s.models);
            }
            Err(e) => {
                let msg = e.to_string();
                out.recall.push(RecallPoint {
                    n_qubits: n,
                    recall: None,
                });
                out.rows.push(MetricRow::failed(
                    &vqc_model_name(n),
                    Stage::Hybrid,
                    Some(n),
                    cfg.seed,
                    msg.clone(),
                ));
                out.runs.push(QubitRun {
                    n_qubits: n,
                    budget,
                    status: RunStatus::Failed,
                    error: Some(msg),
                    circuit: String::new(),
                    parameter_count: 0,
                    explained_variance: Vec::new(),
                    cost_history: Vec::new(),
                    evaluations_used: 0,
                    termination: None,
                    converged: false,
                    best_cost: None,
                    initial_theta: Vec::new(),
                    final_theta: Vec::new(),
                    score_mode: String::new(),
                    seconds: 0.0,
                });
            }
        }
    }
    out.seconds = started.elapsed().as_secs_f64();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stages {
    All,
    Classical,
    Hybrid,
}

/// Fitted models kept alongside the report for optional saving.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub scaler: Option<ScalerModel>,
    pub logistic: Option<LogisticModel>,
    pub qubit_models: Vec<QubitModels>,
}

/// Runs the requested stages on already loaded data and assembles the
/// report.
pub fn run_experiment<E: Executor>(
    cfg: &RunConfig,
    stages: Stages,
    train: &Dataset,
    test: &Dataset,
    provenance: Provenance,
    exec: &E,
) -> Result<(RunReport, Artifacts)> {
    cfg.validate()?;
    let started = Instant::now();
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        dataset: DatasetInfo {
            provenance,
            n_features: train.n_features(),
            train_rows: train.len(),
            test_rows: test.len(),
            train_positives: train.positives(),
            test_positives: test.positives(),
            rejected_train: train.rejected.clone(),
            rejected_test: test.rejected.clone(),
        },
        config: cfg.clone(),
        metrics: Vec::new(),
        pca_variance: Vec::new(),
        recall_vs_qubits: Vec::new(),
        qubit_runs: Vec::new(),
        roc: Vec::new(),
        fitted: FittedSummary::default(),
        timings: Timings::default(),
    };
    let mut artifacts = Artifacts::default();

    if matches!(stages, Stages::All | Stages::Classical) {
        let c = run_classical_stage(cfg, train, test)?;
        report.metrics.extend(c.rows);
        report.roc.extend(c.roc);
        report.fitted.scaler = c.scaler.clone();
        report.timings.classical_seconds = c.seconds;
        artifacts.scaler = c.scaler;
        artifacts.logistic = Some(c.logistic);
    }
    if matches!(stages, Stages::All | Stages::Hybrid) {
        let h = run_hybrid_stage(cfg, train, test, exec)?;
        report.metrics.extend(h.rows);
        report.roc.extend(h.roc);
        report.pca_variance = h.variance;
        report.recall_vs_qubits = h.recall;
        report.qubit_runs = h.runs;
        report.fitted.pca = h
            .models
            .iter()
            .filter_map(|m| m.pca.as_ref().map(|p| (m.n_qubits, p.explained_variance.clone())))
            .collect();
        if report.fitted.scaler.is_none() {
            report.fitted.scaler = h.scaler.clone();
        }
        if artifacts.scaler.is_none() {
            artifacts.scaler = h.scaler;
        }
        report.timings.hybrid_seconds = h.seconds;
        artifacts.qubit_models = h.models;
    }
    report.timings.total_seconds = started.elapsed().as_secs_f64();
    Ok((report, artifacts))
}
