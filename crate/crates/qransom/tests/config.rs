use qransom::config::{default_budget, parse_list, RunConfig};
use qransom::error::HarnessError;
use qransom_core::circuits::PhaseConvention;

#[test]
fn defaults_follow_the_documented_sweep() {
    let cfg = RunConfig::default();
    assert_eq!(cfg.seed, 42);
    assert_eq!(cfg.vqc.qubit_counts, vec![4, 8, 12]);
    assert_eq!(cfg.vqc.budgets, vec![100, 80, 80]);
    assert_eq!((cfg.vqc.feature_map_reps, cfg.vqc.ansatz_reps), (2, 3));
    assert_eq!(cfg.vqc.phase_convention, PhaseConvention::Paper);
    assert_eq!(cfg.vqc.angle_scale, 1.0);
    assert!(cfg.validate().is_ok());
    let budgets: Vec<usize> = cfg.vqc.qubit_counts.iter().map(|&n| default_budget(n)).collect();
    assert_eq!(budgets, cfg.vqc.budgets);
}

#[test]
fn partial_file_fills_defaults() {
    let cfg = RunConfig::from_toml_str(
        "seed = 7\n[vqc]\nqubit_counts = [2]\nbudgets = [150]\nphase_convention = \"standard\"\n",
    )
    .unwrap();
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.vqc.qubit_counts, vec![2]);
    assert_eq!(cfg.vqc.phase_convention, PhaseConvention::Standard);
    assert_eq!(cfg.synthetic.n_features, 16);
    cfg.validate().unwrap();
}

#[test]
fn toml_round_trip() {
    let mut cfg = RunConfig::default();
    cfg.vqc.shots = Some(1000);
    cfg.data.external_baselines = Some("ext.csv".into());
    let back = RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn unknown_keys_rejected() {
    for text in ["sed = 1\n", "[vqc]\nqubits = [4]\n", "[nonsense]\n"] {
        let err = RunConfig::from_toml_str(text).unwrap_err();
        assert!(matches!(err, HarnessError::Config(_)), "{text}");
        assert_eq!(err.exit_code(), 1);
    }
}

#[test]
fn invalid_values_rejected() {
    type Mutation = Box<dyn Fn(&mut RunConfig)>;
    let cases: Vec<(&str, Mutation)> = vec![
        ("misaligned budgets", Box::new(|c| c.vqc.budgets = vec![100, 80])),
        (
            "duplicate counts",
            Box::new(|c| {
                c.vqc.qubit_counts = vec![4, 4];
                c.vqc.budgets = vec![1, 1];
            }),
        ),
        ("zero qubits", Box::new(|c| c.vqc.qubit_counts[0] = 0)),
        ("too many qubits", Box::new(|c| c.vqc.qubit_counts[0] = 21)),
        ("zero reps", Box::new(|c| c.vqc.ansatz_reps = 0)),
        ("zero budget", Box::new(|c| c.vqc.budgets[1] = 0)),
        ("bad angle scale", Box::new(|c| c.vqc.angle_scale = 0.0)),
        ("zero shots", Box::new(|c| c.vqc.shots = Some(0))),
        ("zero threads", Box::new(|c| c.threads = Some(0))),
        ("lonely train path", Box::new(|c| c.data.train = Some("a.csv".into()))),
        ("rho order", Box::new(|c| c.vqc.rho_end = 2.0)),
    ];
    for (name, mutate) in cases {
        let mut cfg = RunConfig::default();
        mutate(&mut cfg);
        assert!(cfg.validate().is_err(), "{name} accepted");
    }
}

#[test]
fn list_parsing() {
    assert_eq!(parse_list("4, 8,12").unwrap(), vec![4, 8, 12]);
    assert!(parse_list("4,x").is_err());
    assert!(parse_list("-1").is_err());
}
