use qdist::harness::{run, run_scaling, Command, ExperimentSpec, RunOutput, ScalingConfig, ScalingTester};

fn spec(command: Command, extra: &[&str]) -> ExperimentSpec {
    let mut s = ExperimentSpec::new();
    s.set("experiment", "command", command.as_str()).unwrap();
    s.set("experiment", "seed", "42").unwrap();
    s.set("experiment", "diagnostics", "yes").unwrap();
    for e in extra {
        s.set_dotted(e).unwrap();
    }
    s
}

fn small(command: Command) -> ExperimentSpec {
    match command {
        Command::EstProb => spec(command, &["experiment.trials=500", "instance.n=100", "instance.target_size=10"]),
        Command::EstDist => spec(command, &["experiment.trials=20", "instance.n=100", "instance.generator=biased"]),
        Command::Uniformity => spec(command, &["experiment.trials=50", "instance.n=10000"]),
        Command::Orthogonality => spec(command, &["experiment.trials=20", "instance.n=1000", "instance.generator=disjoint"]),
        Command::BaselineUniformity => spec(command, &["experiment.trials=50", "instance.n=10000"]),
        Command::BaselineStatDiff => spec(command, &["experiment.trials=20", "instance.n=200", "instance.generator=overlapping"]),
        Command::BaselineOrthogonality => spec(command, &["experiment.trials=50", "instance.n=1000", "instance.generator=overlapping"]),
        Command::Scaling => spec(command, &["scaling.tester=uniformity", "scaling.n_values=1e2..1e5", "scaling.trials=40"]),
        Command::Calibrate => spec(command, &["scaling.tester=baseline-uniformity", "instance.n=1000", "scaling.trials=40"]),
        Command::LbCollision => spec(command, &["experiment.trials=50", "instance.n=64"]),
        Command::LbFingerprint => spec(command, &["experiment.trials=500", "instance.n=20", "tester.rate=40"]),
        Command::Corollary => spec(command, &[]),
        Command::Instance => spec(command, &["instance.n=12", "instance.generator=half-support"]),
    }
}

fn render(o: &RunOutput) -> String {
    let mut s = o.summary.to_csv_string();
    if let Some(d) = &o.diagnostics {
        s.push_str(&d.to_csv_string());
    }
    if let Some(t) = &o.text {
        s.push_str(t);
    }
    s
}

#[test]
fn every_command_replays_exactly() {
    for command in Command::ALL {
        let a = run(&small(command)).unwrap_or_else(|e| panic!("{command}: {e}"));
        let b = run(&small(command)).unwrap();
        assert_eq!(render(&a), render(&b), "{command}");
        assert!(a.summary.to_csv_string().starts_with("# qdist-csv v1 "));
        assert!(!a.summary.rows.is_empty(), "{command}");
    }
}

#[test]
fn seeds_matter() {
    let a = run(&small(Command::EstProb)).unwrap();
    let mut s = small(Command::EstProb);
    s.set("experiment", "seed", "43").unwrap();
    let b = run(&s).unwrap();
    assert_ne!(render(&a), render(&b));
}

fn num(o: &RunOutput, column: &str) -> f64 {
    o.summary.cell(0, column).unwrap().parse().unwrap()
}

#[test]
fn reported_costs_add_up() {
    let o = run(&small(Command::EstProb)).unwrap();
    assert_eq!(num(&o, "quantum_queries"), num(&o, "m") * 500.0);

    for c in [Command::Uniformity, Command::Orthogonality, Command::BaselineUniformity] {
        let o = run(&small(c)).unwrap();
        let total = num(&o, "mean_queries");
        let parts = num(&o, "mean_classical") + num(&o, "mean_quantum");
        assert!((total - parts).abs() < 1e-9 * total.max(1.0), "{c}");
        assert!((num(&o, "accept_rate") + num(&o, "reject_rate") - 1.0).abs() < 1e-12);
    }

    let o = run(&small(Command::EstDist)).unwrap();
    let n_samples = num(&o, "n_samples");
    let m_inner = num(&o, "m_inner");
    assert_eq!(num(&o, "max_queries"), n_samples * (1.0 + 2.0 * m_inner));
}

#[test]
fn saturated_smallest_n_is_left_out_of_the_fit() {
    let cfg = ScalingConfig {
        tester: ScalingTester::BaselineUniformity,
        n_values: vec![100, 1_000, 10_000, 100_000, 1_000_000],
        lambda_start: 40.0,
        trials: 40,
        seed: 3,
        ..ScalingConfig::default()
    };
    let res = run_scaling(&cfg).unwrap();
    assert!(res.points[0].saturated);
    assert_eq!(res.excluded, vec![100]);
}

#[test]
fn scaling_needs_enough_points() {
    let s = spec(Command::Scaling, &["scaling.n_values=1e3,1e4,1e5"]);
    assert!(run(&s).unwrap_err().is_config());
    let s = spec(Command::Scaling, &["scaling.n_values=1000,2000,4000,8000"]);
    assert!(run(&s).unwrap_err().is_config());
}

#[test]
fn errors_are_classified() {
    let e = run(&spec(Command::Uniformity, &["instance.generator=nope"])).unwrap_err();
    assert!(e.is_config());
    let e = run(&spec(Command::Uniformity, &["experiment.mode=paper", "instance.n=1000"])).unwrap_err();
    assert!(e.is_config(), "{e}");
    let e = run(&spec(
        Command::Calibrate,
        &["scaling.tester=uniformity", "instance.n=1000", "scaling.lambda_start=1e-6", "scaling.lambda_steps=2"],
    ))
    .unwrap_err();
    assert!(!e.is_config(), "{e}");
}

#[test]
fn instance_text_is_an_oracle_file() {
    let o = run(&small(Command::Instance)).unwrap();
    let oracle = qdist::dist::io::parse_oracle(o.text.as_deref().unwrap()).unwrap();
    assert_eq!(oracle.n(), 12);
    assert_eq!(num(&o, "l1_to_uniform"), 1.0);
}
