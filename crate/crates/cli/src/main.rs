//! `qdist`: run seeded distribution-testing experiments and write CSV.
//!
//! Exit status is 0 on success, 2 for configuration errors (bad flags, bad
//! spec files, infeasible parameters) and 3 for failures while running.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdist::harness::{run, Command, ExperimentSpec};
use qdist::Error;

#[derive(Parser, Debug)]
#[command(name = "qdist", version, about = "Seeded experiments for quantum and classical distribution testers")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the command named in the spec file's `experiment.command`.
    Run(Common),
    /// Amplitude-estimation coverage on a target set.
    Estprob(Common),
    /// Quantum estimate of the statistical difference of a pair.
    Estdist(Common),
    /// Quantum uniformity tester.
    Uniformity(Common),
    /// Quantum orthogonality tester.
    Orthogonality(Common),
    /// Classical collision-count uniformity tester.
    BaselineUniformity(Common),
    /// Classical plug-in estimate of the statistical difference.
    BaselineStatdiff(Common),
    /// Classical cross-collision orthogonality tester.
    BaselineOrthogonality(Common),
    /// Query-count scaling study with a log-log fit.
    Scaling(Common),
    /// Calibrate the estimation constant or a tester's budget multiplier.
    Calibrate(Common),
    /// Distances produced by the collision-to-orthogonality reduction.
    LbCollision(Common),
    /// Poissonization check and fingerprint distance.
    LbFingerprint(Common),
    /// Exact arithmetic for the half-support lower-bound instance.
    Corollary(Common),
    /// Write an oracle file for a generated instance.
    Instance(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Spec file with `[section]` headers and `key = value` lines.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<String>,
    /// `paper` or `practical`.
    #[arg(long)]
    mode: Option<String>,
    /// Summary CSV path. Without it the CSV goes to stdout and any text
    /// output to stderr; with it, text output goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-trial or per-round CSV path.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Support size; for `scaling`, a range such as `1e3..1e6` or a list.
    #[arg(long = "n", visible_alias = "N", short = 'N')]
    n: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    generator: Option<String>,
    /// Tester studied by `scaling` or `calibrate`.
    #[arg(long)]
    tester: Option<String>,
    /// Override any key, e.g. `--set tester.k_coef=12`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
}

impl Cmd {
    fn parts(&self) -> (Option<Command>, &Common) {
        match self {
            Cmd::Run(c) => (None, c),
            Cmd::Estprob(c) => (Some(Command::EstProb), c),
            Cmd::Estdist(c) => (Some(Command::EstDist), c),
            Cmd::Uniformity(c) => (Some(Command::Uniformity), c),
            Cmd::Orthogonality(c) => (Some(Command::Orthogonality), c),
            Cmd::BaselineUniformity(c) => (Some(Command::BaselineUniformity), c),
            Cmd::BaselineStatdiff(c) => (Some(Command::BaselineStatDiff), c),
            Cmd::BaselineOrthogonality(c) => (Some(Command::BaselineOrthogonality), c),
            Cmd::Scaling(c) => (Some(Command::Scaling), c),
            Cmd::Calibrate(c) => (Some(Command::Calibrate), c),
            Cmd::LbCollision(c) => (Some(Command::LbCollision), c),
            Cmd::LbFingerprint(c) => (Some(Command::LbFingerprint), c),
            Cmd::Corollary(c) => (Some(Command::Corollary), c),
            Cmd::Instance(c) => (Some(Command::Instance), c),
        }
    }
}

fn build_spec(cmd: &Cmd) -> Result<ExperimentSpec, Error> {
    let (command, c) = cmd.parts();
    let mut spec = match &c.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentSpec::parse(&text)?
        }
        None => ExperimentSpec::new(),
    };
    if let Some(command) = command {
        spec.set("experiment", "command", command.as_str())?;
    }
    let command = spec.command()?;
    let path = |p: &PathBuf| p.to_string_lossy().into_owned();
    let flags = [
        ("experiment.seed", c.seed.map(|s| s.to_string())),
        ("experiment.trials", c.trials.clone()),
        ("experiment.mode", c.mode.clone()),
        ("experiment.out", c.out.as_ref().map(path)),
        ("experiment.diagnostics", c.diagnostics.as_ref().map(path)),
        (
            if command == Command::Scaling { "scaling.n_values" } else { "instance.n" },
            c.n.clone(),
        ),
        ("tester.epsilon", c.epsilon.clone()),
        ("instance.generator", c.generator.clone()),
        ("scaling.tester", c.tester.clone()),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            let (section, key) = key.split_once('.').expect("dotted key");
            spec.set(section, key, &v)?;
        }
    }
    for s in &c.set {
        spec.set_dotted(s)?;
    }
    Ok(spec)
}

fn execute(cmd: &Cmd) -> Result<(), Error> {
    let spec = build_spec(cmd)?;
    let out = run(&spec)?;
    let stdout = io::stdout();
    match spec.get("experiment.out") {
        Some(path) => {
            let diag = spec.get("experiment.diagnostics").map(PathBuf::from);
            out.write_files(path.as_ref(), diag.as_deref())?;
            if let Some(text) = &out.text {
                stdout.lock().write_all(text.as_bytes())?;
            }
        }
        None => {
            out.summary.write(stdout.lock())?;
            if let (Some(path), Some(table)) = (spec.get("experiment.diagnostics"), &out.diagnostics) {
                table.write(io::BufWriter::new(fs::File::create(path)?))?;
            }
            if let Some(text) = &out.text {
                io::stderr().lock().write_all(text.as_bytes())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qdist: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
