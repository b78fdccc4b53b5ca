use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qransom::config::{default_budget, parse_list, RunConfig};
use qransom::error::{HarnessError, Result};
use qransom::parallel::RayonExecutor;
use qransom::pipeline::{load_data, run_experiment, Stages};
use qransom::report::{emit_report, RunReport, RunStatus};
use qransom::synth::synth_dataset;

#[derive(Parser)]
#[command(
    name = "qransom",
    version,
    about = "Hybrid quantum-classical ransomware classification experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical baseline and the qubit sweep, then write the report.
    Run(RunArgs),
    /// Classical baseline only.
    Classical(RunArgs),
    /// Qubit sweep only.
    Hybrid(RunArgs),
    /// Write a synthetic train/test CSV pair.
    Synth(SynthArgs),
    /// Re-emit output files from a saved report.json.
    Report {
        /// Saved report.json.
        #[arg(long)]
        from: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated qubit counts, e.g. 4,8,12.
    #[arg(long)]
    qubits: Option<String>,
    /// Comma-separated evaluation budgets, one per qubit count.
    #[arg(long)]
    budgets: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, requires = "test")]
    train: Option<PathBuf>,
    #[arg(long, requires = "train")]
    test: Option<PathBuf>,
    #[arg(long)]
    label_column: Option<String>,
    /// CSV of metric rows from other tools, merged into the tables.
    #[arg(long)]
    external_baselines: Option<PathBuf>,
    /// paper or standard.
    #[arg(long)]
    phase_convention: Option<String>,
    #[arg(long)]
    feature_map_reps: Option<usize>,
    #[arg(long)]
    ansatz_reps: Option<usize>,
    /// Multiplier applied to encoded coordinates before the feature map.
    #[arg(long)]
    angle_scale: Option<f64>,
    /// Score the test split from this many measurement shots.
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Synthetic sample count (used when no CSV paths are given).
    #[arg(long)]
    samples: Option<usize>,
    /// Synthetic feature count.
    #[arg(long)]
    features: Option<usize>,
    /// Synthetic class separation.
    #[arg(long)]
    separation: Option<f64>,
    /// Also write fitted models as text files into this directory.
    #[arg(long)]
    save_models: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 16)]
    features: usize,
    #[arg(long, default_value_t = 6.0)]
    separation: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Directory for train.csv and test.csv.
    #[arg(long)]
    out: PathBuf,
}

fn resolve(args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(q) = &args.qubits {
        cfg.vqc.qubit_counts = parse_list(q)?;
        if args.budgets.is_none() {
            cfg.vqc.budgets = cfg.vqc.qubit_counts.iter().map(|&n| default_budget(n)).collect();
        }
    }
    if let Some(b) = &args.budgets {
        cfg.vqc.budgets = parse_list(b)?;
    }
    if let Some(v) = &args.out {
        cfg.output_dir = v.clone();
    }
    if let (Some(tr), Some(te)) = (&args.train, &args.test) {
        cfg.data.train = Some(tr.clone());
        cfg.data.test = Some(te.clone());
    }
    if let Some(v) = &args.label_column {
        cfg.data.label_column = v.clone();
    }
    if let Some(v) = &args.external_baselines {
        cfg.data.external_baselines = Some(v.clone());
    }
    if let Some(v) = &args.phase_convention {
        cfg.vqc.phase_convention = v.parse()?;
    }
    if let Some(v) = args.feature_map_reps {
        cfg.vqc.feature_map_reps = v;
    }
    if let Some(v) = args.ansatz_reps {
        cfg.vqc.ansatz_reps = v;
    }
    if let Some(v) = args.angle_scale {
        cfg.vqc.angle_scale = v;
    }
    if args.shots.is_some() {
        cfg.vqc.shots = args.shots;
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    if let Some(v) = args.samples {
        cfg.synthetic.n_samples = v;
    }
    if let Some(v) = args.features {
        cfg.synthetic.n_features = v;
    }
    if let Some(v) = args.separation {
        cfg.synthetic.separation = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &RunArgs, stages: Stages) -> Result<()> {
    let cfg = resolve(args)?;
    let exec = RayonExecutor::new(cfg.threads)?;
    let (train, test, provenance) = load_data(&cfg)?;
    for d in [&train, &test] {
        if !d.rejected.is_empty() {
            eprintln!(
                "{}: rejected {} rows (first at line {})",
                d.split,
                d.rejected.len(),
                d.rejected[0].line
            );
        }
    }
    eprintln!(
        "data: {} train / {} test rows, {} features",
        train.len(),
        test.len(),
        train.n_features()
    );
    let (report, artifacts) = run_experiment(&cfg, stages, &train, &test, provenance, &exec)?;
    for row in &report.metrics {
        match (row.status, row.recall) {
            (RunStatus::Ok, Some(r)) => eprintln!("{}: recall {:.2}%", row.model, r * 100.0),
            _ => eprintln!("{}: failed: {}", row.model, row.error.as_deref().unwrap_or("")),
        }
    }
    let written = emit_report(&report, &cfg.output_dir)?;
    eprintln!("wrote {} files to {}", written.len(), cfg.output_dir.display());
    if let Some(dir) = &args.save_models {
        qransom::save_models(&artifacts, dir)?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => run(&a, Stages::All),
        Command::Classical(a) => run(&a, Stages::Classical),
        Command::Hybrid(a) => run(&a, Stages::Hybrid),
        Command::Synth(a) => {
            let (train, test) = synth_dataset(a.samples, a.features, a.separation, a.seed)?;
            std::fs::create_dir_all(&a.out).map_err(|e| HarnessError::io(&a.out, e))?;
            train.write_csv(&a.out.join("train.csv"), &a.label_column)?;
            test.write_csv(&a.out.join("test.csv"), &a.label_column)?;
            Ok(())
        }
        Command::Report { from, out } => {
            let report = RunReport::load(&from)?;
            emit_report(&report, &out)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
