//! Command runners. Each turns an [`ExperimentSpec`] into CSV tables.
//!
//! Trials run in parallel; trial `t` draws from `stream(seed, command, t)`
//! and results are collected in trial order, so output does not depend on
//! scheduling.

use rayon::prelude::*;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use super::instances::{pair_instance, single_instance};
use super::scaling::{calibrate_point, run_scaling, ScalingConfig};
use super::spec::{Command, ExperimentSpec};
use super::table::{cell, Table};
use crate::amp_est::{
    calibrate_constant, est_prob, exact_coverage, queries_for, CalibrationSweep, CALIBRATED_C,
    DEFAULT_GRID,
};
use crate::classical::{
    classical_orthogonality_test, classical_statdiff_plugin, classical_uniformity_test,
};
use crate::dist::{
    generators, io::write_oracle, l1_distance, l1_distance_exact, random_permutation,
    QueryLedger,
};
use crate::error::{Error, Result};
use crate::lower_bounds::{
    build_collision_oracles, corollary_report, empirical_fingerprint_tv,
    matching_parity_distance, parse_decimal, poisson_goodness_of_fit, valiant_bound,
    CollisionFunction, PoissonizedSampler,
};
use crate::rng::{self, SimRng};
use crate::testers::{
    est_dist, orthogonality_test, uniformity_test, ConstantMode, OrthogonalityParams,
    PracticalStatDiff, PracticalUniformity, StatDiffParams, TestVerdict, UniformityParams,
};

/// Tables produced by one command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub command: Command,
    pub summary: Table,
    /// Per-trial or per-round detail, when the command has any.
    pub diagnostics: Option<Table>,
    /// Non-tabular output: an oracle file, a calibration record or a report.
    pub text: Option<String>,
}

impl RunOutput {
    fn new(command: Command, summary: Table) -> Self {
        Self {
            command,
            summary,
            diagnostics: None,
            text: None,
        }
    }

    /// Writes the summary CSV and, if both exist, the diagnostics CSV.
    pub fn write_files(&self, summary: &Path, diagnostics: Option<&Path>) -> Result<()> {
        self.summary.write(BufWriter::new(File::create(summary)?))?;
        if let (Some(path), Some(table)) = (diagnostics, &self.diagnostics) {
            table.write(BufWriter::new(File::create(path)?))?;
        }
        Ok(())
    }
}

struct Common {
    seed: u64,
    trials: u64,
    mode: ConstantMode,
}

fn common(spec: &ExperimentSpec, default_trials: u64) -> Result<Common> {
    let trials = spec.u64_or("experiment.trials", default_trials)?;
    if trials == 0 {
        return Err(Error::Config("experiment.trials must be at least 1".into()));
    }
    Ok(Common {
        seed: spec.u64_or("experiment.seed", 0)?,
        trials,
        mode: spec.str_or("experiment.mode", "practical").parse()?,
    })
}

fn farm<T, F>(c: &Common, label: &str, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut SimRng) -> Result<T> + Sync,
{
    (0..c.trials)
        .into_par_iter()
        .map(|t| f(&mut rng::stream(c.seed, label, t)))
        .collect()
}

/// Runs the command named in `experiment.command`.
pub fn run(spec: &ExperimentSpec) -> Result<RunOutput> {
    let command = spec.command()?;
    match command {
        Command::EstProb => run_estprob(spec),
        Command::EstDist | Command::BaselineStatDiff => run_statdiff(spec, command),
        Command::Uniformity
        | Command::Orthogonality
        | Command::BaselineUniformity
        | Command::BaselineOrthogonality => run_tester(spec, command),
        Command::Scaling => run_scaling_cmd(spec),
        Command::Calibrate => run_calibrate(spec),
        Command::LbCollision => run_lb_collision(spec),
        Command::LbFingerprint => run_lb_fingerprint(spec),
        Command::Corollary => run_corollary(spec),
        Command::Instance => run_instance(spec),
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0u64), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

fn run_estprob(spec: &ExperimentSpec) -> Result<RunOutput> {
    let c = common(spec, 10_000)?;
    let o = single_instance(spec, c.seed)?;
    let target: Vec<u32> = match spec.get("instance.target") {
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&x| (x as usize) < o.n())
                    .ok_or_else(|| Error::Config(format!("bad target element {s:?}")))
            })
            .collect::<Result<_>>()?,
        None => {
            let k = spec.u64_or("instance.target_size", 1)?;
            if k as usize > o.n() {
                return Err(Error::Config("target_size exceeds N".into()));
            }
            (0..k as u32).collect()
        }
    };
    let true_mass = o.preimage_count(&target) as f64 / o.s() as f64;
    let delta = spec.f64_or("tester.delta", 0.05)?;
    let omega = spec.f64_or("tester.omega", 0.1)?;
    let pa_upper = spec.f64_or("tester.pa_upper", true_mass)?;
    let cc = spec.f64_or("tester.c", CALIBRATED_C)?;
    if !(delta > 0.0 && omega > 0.0 && omega <= 0.5 && (0.0..=1.0).contains(&pa_upper) && cc > 0.0) {
        return Err(Error::Config(
            "need delta > 0, omega in (0, 1/2], pa_upper in [0, 1] and c > 0".into(),
        ));
    }
    let m = match spec.u64_opt("tester.m")? {
        Some(m) => m,
        None => queries_for(delta, omega, pa_upper, cc),
    };
    let runs = farm(&c, "estprob", |r| {
        let mut ledger = QueryLedger::new();
        let e = est_prob(&o, &target, m, r, &mut ledger)?;
        Ok((e, ledger.total()))
    })?;
    let within = runs.iter().filter(|(e, _)| (e.estimate - true_mass).abs() <= delta).count();
    let zeros = runs.iter().filter(|(e, _)| e.estimate == 0.0).count();
    let mut summary = Table::new(
        "estprob",
        &[
            "n", "target_size", "true_mass", "delta", "omega", "c", "m", "trials",
            "mean_estimate", "coverage", "exact_coverage", "zero_estimates", "quantum_queries",
        ],
    );
    summary.push(vec![
        cell(o.n()),
        cell(target.len()),
        cell(true_mass),
        cell(delta),
        cell(omega),
        cell(cc),
        cell(m),
        cell(c.trials),
        cell(mean(runs.iter().map(|(e, _)| e.estimate))),
        cell(within as f64 / c.trials as f64),
        cell(exact_coverage(true_mass, m, delta)),
        cell(zeros),
        cell(runs.iter().map(|(_, q)| q).sum::<u64>()),
    ]);
    let mut diag = Table::new("estprob-trials", &["trial", "raw_outcome", "estimate", "within"]);
    for (t, (e, _)) in runs.iter().enumerate() {
        diag.push(vec![
            cell(t),
            cell(e.raw_outcome),
            cell(e.estimate),
            cell((e.estimate - true_mass).abs() <= delta),
        ]);
    }
    let mut out = RunOutput::new(Command::EstProb, summary);
    out.diagnostics = Some(diag);
    Ok(out)
}

fn statdiff_params(spec: &ExperimentSpec, n: usize, mode: ConstantMode) -> Result<StatDiffParams> {
    let eps = spec.f64_or("tester.epsilon", 0.1)?;
    let tau = spec.f64_or("tester.tau", 0.1)?;
    let mut p = match mode {
        ConstantMode::Paper => {
            StatDiffParams::paper(n, eps, tau, spec.f64_or("tester.c", CALIBRATED_C)?)?
        }
        ConstantMode::Practical => {
            let d = PracticalStatDiff::default();
            StatDiffParams::practical_with(
                n,
                eps,
                tau,
                PracticalStatDiff {
                    n_coef: spec.f64_or("tester.n_coef", d.n_coef)?,
                    inner_coef: spec.f64_or("tester.inner_coef", d.inner_coef)?,
                },
            )?
        }
    };
    if let Some(v) = spec.u64_opt("tester.n_samples")? {
        p.n = v;
    }
    if let Some(v) = spec.u64_opt("tester.m_inner")? {
        p.m_inner = v;
    }
    p.validate()?;
    Ok(p)
}

fn sqrt_samples(spec: &ExperimentSpec, n: usize, default_coef: f64) -> Result<u64> {
    match spec.u64_opt("tester.samples")? {
        Some(m) => Ok(m),
        None => {
            let coef = spec.f64_or("tester.sample_coef", default_coef)?;
            Ok(((coef * (n as f64).sqrt()).ceil() as u64).max(1))
        }
    }
}

fn run_statdiff(spec: &ExperimentSpec, command: Command) -> Result<RunOutput> {
    let c = common(spec, 200)?;
    let inst = pair_instance(spec, c.seed)?;
    let n = inst.p.n();
    let half = inst.distance / 2.0;
    let tolerance = spec.f64_or("tester.tolerance", spec.f64_or("tester.epsilon", 0.1)?)?;
    let (n_samples, m_inner, reports) = if command == Command::EstDist {
        let params = statdiff_params(spec, n, c.mode)?;
        let reports = farm(&c, command.as_str(), |r| est_dist(&inst.p, &inst.q, &params, r))?;
        (params.n, params.m_inner, reports)
    } else {
        let m = sqrt_samples(spec, n, 1000.0)?;
        let reports = farm(&c, command.as_str(), |r| classical_statdiff_plugin(&inst.p, &inst.q, m, r))?;
        (m, 0, reports)
    };
    let within = reports.iter().filter(|r| (r.estimate - half).abs() < tolerance).count();
    let quantum = |r: &crate::testers::StatDiffReport| {
        (r.ledgers[0].quantum_applications() + r.ledgers[1].quantum_applications()) as f64
    };
    let classical = |r: &crate::testers::StatDiffReport| {
        (r.ledgers[0].classical_samples() + r.ledgers[1].classical_samples()) as f64
    };
    let mut summary = Table::new(
        command.as_str(),
        &[
            "generator", "n", "distance", "mode", "n_samples", "m_inner", "trials",
            "mean_estimate", "tolerance", "within_rate", "mean_classical", "mean_quantum",
            "mean_queries", "max_queries", "queries_per_sqrt_n",
        ],
    );
    let max_q = reports.iter().map(|r| r.total_queries()).max().unwrap_or(0);
    summary.push(vec![
        cell(spec.str_or("instance.generator", "identical")),
        cell(n),
        cell(inst.distance),
        cell(if command == Command::EstDist { c.mode.as_str() } else { "classical" }),
        cell(n_samples),
        cell(m_inner),
        cell(c.trials),
        cell(mean(reports.iter().map(|r| r.estimate))),
        cell(tolerance),
        cell(within as f64 / c.trials as f64),
        cell(mean(reports.iter().map(classical))),
        cell(mean(reports.iter().map(quantum))),
        cell(mean(reports.iter().map(|r| r.total_queries() as f64))),
        cell(max_q),
        cell(max_q as f64 / (n as f64).sqrt()),
    ]);
    let mut diag = Table::new(
        &format!("{}-trials", command.as_str()),
        &["trial", "estimate", "error", "classical", "quantum"],
    );
    for (t, r) in reports.iter().enumerate() {
        diag.push(vec![
            cell(t),
            cell(r.estimate),
            cell((r.estimate - half).abs()),
            cell(classical(r)),
            cell(quantum(r)),
        ]);
    }
    let mut out = RunOutput::new(command, summary);
    out.diagnostics = Some(diag);
    Ok(out)
}

fn uniformity_params(spec: &ExperimentSpec, n: usize, mode: ConstantMode) -> Result<UniformityParams> {
    let eps = spec.f64_or("tester.epsilon", 0.5)?;
    let mut p = match mode {
        ConstantMode::Paper => {
            UniformityParams::paper(n, eps, spec.f64_or("tester.c", CALIBRATED_C)?)?
        }
        ConstantMode::Practical => {
            let d = PracticalUniformity::default();
            UniformityParams::practical_with(
                n,
                eps,
                PracticalUniformity {
                    m_coef: spec.f64_or("tester.m_coef", d.m_coef)?,
                    k_coef: spec.f64_or("tester.k_coef", d.k_coef)?,
                    gap: spec.f64_or("tester.gap", d.gap)?,
                    repeats: spec.u64_or("tester.repeats", d.repeats)?,
                },
            )?
        }
    };
    if let Some(v) = spec.u64_opt("tester.m_samples")? {
        p.m_samples = v;
    }
    if let Some(v) = spec.u64_opt("tester.k_queries")? {
        p.k_queries = v;
    }
    if let Some(v) = spec.u64_opt("tester.l_repeats")? {
        p.l_repeats = v;
    }
    if let Some(v) = spec.f64_opt("tester.threshold")? {
        p.threshold = v;
    }
    p.validate(n)?;
    Ok(p)
}

fn orthogonality_params(
    spec: &ExperimentSpec,
    n: usize,
    mode: ConstantMode,
) -> Result<OrthogonalityParams> {
    let eps = spec.f64_or("tester.epsilon", 0.5)?;
    let mut p = match mode {
        ConstantMode::Paper => {
            OrthogonalityParams::paper(n, eps, spec.f64_or("tester.c", CALIBRATED_C)?)?
        }
        ConstantMode::Practical => {
            OrthogonalityParams::practical(n, eps, spec.f64_or("tester.coef", 2.0)?)?
        }
    };
    if let Some(v) = spec.u64_opt("tester.m_samples")? {
        p.m_samples = v;
    }
    if let Some(v) = spec.u64_opt("tester.k_queries")? {
        p.k_queries = v;
    }
    if let Some(v) = spec.f64_opt("tester.threshold")? {
        p.threshold = v;
    }
    if let Some(v) = spec.u64_opt("tester.rounds")? {
        p.rounds = v;
    }
    p.validate()?;
    Ok(p)
}

fn run_tester(spec: &ExperimentSpec, command: Command) -> Result<RunOutput> {
    let c = common(spec, 200)?;
    let single = matches!(command, Command::Uniformity | Command::BaselineUniformity);
    let (op, oq, default_gen) = if single {
        (single_instance(spec, c.seed)?, None, "uniform")
    } else {
        let p = pair_instance(spec, c.seed)?;
        (p.p, Some(p.q), "identical")
    };
    let n = op.n();
    let eps = spec.f64_or("tester.epsilon", 0.5)?;
    let keep = spec.has("experiment.diagnostics");
    let label = command.as_str();
    let (m, k, rounds, threshold, mode, verdicts): (u64, u64, u64, f64, &str, Vec<TestVerdict>) =
        match command {
            Command::Uniformity => {
                let params = uniformity_params(spec, n, c.mode)?;
                let v = farm(&c, label, |r| uniformity_test(&op, &params, r))?;
                (params.m_samples, params.k_queries, params.l_repeats, params.threshold, c.mode.as_str(), v)
            }
            Command::Orthogonality => {
                let params = orthogonality_params(spec, n, c.mode)?;
                let oq = oq.as_ref().expect("pair instance");
                let v = farm(&c, label, |r| orthogonality_test(&op, oq, &params, r))?;
                (params.m_samples, params.k_queries, params.rounds, params.threshold, c.mode.as_str(), v)
            }
            Command::BaselineUniformity => {
                let m = sqrt_samples(spec, n, 20.0)?;
                let v = farm(&c, label, |r| classical_uniformity_test(&op, m, eps, r))?;
                (m, 0, 1, (1.0 + eps * eps / 2.0) / n as f64, "classical", v)
            }
            _ => {
                let m = sqrt_samples(spec, n, 4.0)?;
                let oq = oq.as_ref().expect("pair instance");
                let v = farm(&c, label, |r| classical_orthogonality_test(&op, oq, m, r))?;
                (m, 0, 1, 0.0, "classical", v)
            }
        };
    let rejects = verdicts.iter().filter(|v| v.decision.is_reject()).count() as f64;
    let t = c.trials as f64;
    let ledger_mean = |f: fn(&QueryLedger) -> u64| {
        mean(verdicts.iter().map(|v| f(&v.combined_ledger()) as f64))
    };
    let mut summary = Table::new(
        label,
        &[
            "generator", "n", "mode", "epsilon", "trials", "m_samples", "k_queries", "rounds",
            "threshold", "accept_rate", "reject_rate", "mean_classical", "mean_quantum",
            "mean_queries",
        ],
    );
    summary.push(vec![
        cell(spec.str_or("instance.generator", default_gen)),
        cell(n),
        cell(mode),
        cell(eps),
        cell(c.trials),
        cell(m),
        cell(k),
        cell(rounds),
        cell(threshold),
        cell((t - rejects) / t),
        cell(rejects / t),
        cell(ledger_mean(QueryLedger::classical_samples)),
        cell(ledger_mean(QueryLedger::quantum_applications)),
        cell(ledger_mean(QueryLedger::total)),
    ]);
    let mut out = RunOutput::new(command, summary);
    if keep {
        let mut diag = Table::new(
            &format!("{label}-rounds"),
            &["trial", "round", "statistic", "threshold", "true_value", "collision", "distinct", "decision"],
        );
        for (trial, v) in verdicts.iter().enumerate() {
            for r in &v.rounds {
                diag.push(vec![
                    cell(trial),
                    cell(r.round),
                    cell(r.statistic),
                    cell(r.threshold),
                    cell(r.true_value),
                    cell(r.collision),
                    cell(r.distinct),
                    cell(r.decision.as_str()),
                ]);
            }
        }
        out.diagnostics = Some(diag);
    }
    Ok(out)
}

fn run_scaling_cmd(spec: &ExperimentSpec) -> Result<RunOutput> {
    let cfg = ScalingConfig::from_spec(spec)?;
    let res = run_scaling(&cfg)?;
    let mut summary = Table::new(
        "scaling",
        &[
            "tester", "n", "lambda", "mean_queries", "err_null", "err_alt", "saturated",
            "included", "slope", "slope_se", "intercept",
        ],
    );
    for p in &res.points {
        summary.push(vec![
            cell(res.tester),
            cell(p.n),
            cell(p.measurement.lambda),
            cell(p.measurement.mean_queries),
            cell(p.measurement.err_null),
            cell(p.measurement.err_alt),
            cell(p.saturated),
            cell(!res.excluded.contains(&p.n)),
            cell(res.fit.slope),
            cell(res.fit.slope_se),
            cell(res.fit.intercept),
        ]);
    }
    let mut diag = Table::new(
        "scaling-sweep",
        &["n", "lambda", "err_null", "err_alt", "mean_queries"],
    );
    for p in &res.points {
        for m in &p.sweep {
            diag.push(vec![
                cell(p.n),
                cell(m.lambda),
                cell(m.err_null),
                cell(m.err_alt),
                cell(m.mean_queries),
            ]);
        }
    }
    let mut out = RunOutput::new(Command::Scaling, summary);
    out.diagnostics = Some(diag);
    Ok(out)
}

fn run_calibrate(spec: &ExperimentSpec) -> Result<RunOutput> {
    let target = spec.str_or("scaling.tester", "estprob");
    if target == "estprob" {
        let c = common(spec, 10_000)?;
        let record = calibrate_constant(&DEFAULT_GRID, c.trials, &CalibrationSweep::default(), c.seed)?;
        let mut summary = Table::new(
            "calibrate-estprob",
            &["c", "pa", "delta", "omega", "m", "exact_coverage", "target_coverage"],
        );
        for cellv in &record.grid {
            let m = queries_for(cellv.delta, cellv.omega, cellv.pa, record.c);
            summary.push(vec![
                cell(record.c),
                cell(cellv.pa),
                cell(cellv.delta),
                cell(cellv.omega),
                cell(m),
                cell(exact_coverage(cellv.pa, m, cellv.delta)),
                cell(1.0 - cellv.omega),
            ]);
        }
        let mut out = RunOutput::new(Command::Calibrate, summary);
        out.text = Some(record.to_string());
        return Ok(out);
    }
    let cfg = ScalingConfig::from_spec(spec)?;
    let n = spec.u64_or("instance.n", 100_000)?;
    let point = calibrate_point(&cfg, n)?;
    let mut summary = Table::new(
        "calibrate-tester",
        &["tester", "n", "lambda", "err_null", "err_alt", "mean_queries", "chosen"],
    );
    for (i, m) in point.sweep.iter().enumerate() {
        summary.push(vec![
            cell(cfg.tester),
            cell(n),
            cell(m.lambda),
            cell(m.err_null),
            cell(m.err_alt),
            cell(m.mean_queries),
            cell(i as u32 == point.lambda_index),
        ]);
    }
    Ok(RunOutput::new(Command::Calibrate, summary))
}

fn run_lb_collision(spec: &ExperimentSpec) -> Result<RunOutput> {
    let c = common(spec, 1000)?;
    let n = spec.u64_or("instance.n", 1024)? as usize;
    let rows = farm(&c, "lb-collision", |r| {
        let mut out = Vec::with_capacity(2);
        for two_to_one in [false, true] {
            let h = if two_to_one {
                CollisionFunction::random_two_to_one(n, r)?
            } else {
                CollisionFunction::random_one_to_one(n, r)?
            };
            let sigma = random_permutation(n, r);
            let (op, oq) = build_collision_oracles(&h, &sigma)?;
            let exact = l1_distance_exact(&op.distribution(), &oq.distribution())?;
            let agrees = if two_to_one {
                Some(matching_parity_distance(&h, &sigma)? == exact)
            } else {
                None
            };
            out.push((h.kind(), exact, agrees));
        }
        Ok(out)
    })?;
    let to_f = |r: &num_rational::Ratio<u128>| *r.numer() as f64 / *r.denom() as f64;
    let seven_quarters = num_rational::Ratio::new(7u128, 4);
    let two = num_rational::Ratio::from_integer(2u128);
    let mut summary = Table::new(
        "lb-collision",
        &[
            "kind", "n", "trials", "mean_distance", "min_distance", "max_distance",
            "rate_at_most_7_4", "formula_agreement", "rate_exactly_2",
        ],
    );
    for idx in 0..2 {
        let col: Vec<_> = rows.iter().map(|r| &r[idx]).collect();
        let t = col.len() as f64;
        summary.push(vec![
            cell(col[0].0.as_str()),
            cell(n),
            cell(c.trials),
            cell(mean(col.iter().map(|x| to_f(&x.1)))),
            cell(col.iter().map(|x| to_f(&x.1)).fold(f64::INFINITY, f64::min)),
            cell(col.iter().map(|x| to_f(&x.1)).fold(f64::NEG_INFINITY, f64::max)),
            cell(col.iter().filter(|x| x.1 <= seven_quarters).count() as f64 / t),
            cell(if idx == 1 {
                col.iter().filter(|x| x.2 == Some(true)).count() as f64 / t
            } else {
                f64::NAN
            }),
            cell(col.iter().filter(|x| x.1 == two).count() as f64 / t),
        ]);
    }
    let mut diag = Table::new("lb-collision-trials", &["trial", "kind", "distance", "formula_agrees"]);
    for (t, r) in rows.iter().enumerate() {
        for x in r {
            let agrees = x.2.map_or("na".to_string(), cell);
            diag.push(vec![cell(t), cell(x.0.as_str()), cell(x.1), agrees]);
        }
    }
    let mut out = RunOutput::new(Command::LbCollision, summary);
    out.diagnostics = Some(diag);
    Ok(out)
}

fn run_lb_fingerprint(spec: &ExperimentSpec) -> Result<RunOutput> {
    let c = common(spec, 10_000)?;
    let n = spec.u64_or("instance.n", 100)? as usize;
    let generator = spec.str_or("instance.generator", "uniform");
    let p = match generator {
        "uniform" => generators::uniform(n)?.p,
        "half-support" => generators::half_support(n)?.p,
        other => {
            return Err(Error::Config(format!(
                "lb-fingerprint supports uniform and half-support, got {other:?}"
            )))
        }
    };
    let u = generators::uniform(n)?.p;
    let rate = spec.f64_or("tester.rate", 200.0)?;
    let a = spec.u64_or("tester.a", 3)?;
    let tv_rate = (n as f64).sqrt() / 2f64.powi(a as i32);
    let delta = match spec.f64_opt("tester.delta")? {
        Some(d) => d,
        None => p.max_weight() * tv_rate * (1.0 + 1e-12),
    };

    // Pool the counts of every heaviest element across trials.
    let heaviest: Vec<usize> = (0..n).filter(|&i| p.counts()[i] == *p.counts().iter().max().unwrap()).collect();
    let sampler = PoissonizedSampler::new(&p, rate)?;
    let mut r = rng::stream(c.seed, "lb-fingerprint", 0);
    let mut observations = Vec::with_capacity(heaviest.len() * c.trials as usize);
    for _ in 0..c.trials {
        let counts = sampler.counts(&mut r);
        observations.extend(heaviest.iter().map(|&i| counts[i]));
    }
    let gof = poisson_goodness_of_fit(&observations, rate * p.max_weight())?;
    let mut r = rng::stream(c.seed, "lb-fingerprint", 1);
    let fd = empirical_fingerprint_tv(&p, &u, tv_rate, c.trials, &mut r)?;
    let bound = valiant_bound(&p, tv_rate, delta)?;
    let mut summary = Table::new(
        "lb-fingerprint",
        &[
            "generator", "n", "rate", "trials", "gof_statistic", "gof_dof", "gof_p_value",
            "tv_rate", "tv", "l1", "fingerprint_support", "tv_biased", "delta", "valiant_bound",
        ],
    );
    summary.push(vec![
        cell(generator),
        cell(n),
        cell(rate),
        cell(c.trials),
        cell(gof.statistic),
        cell(gof.dof),
        cell(gof.p_value),
        cell(tv_rate),
        cell(fd.tv),
        cell(fd.l1),
        cell(fd.support),
        cell(fd.biased),
        cell(delta),
        cell(bound),
    ]);
    Ok(RunOutput::new(Command::LbFingerprint, summary))
}

fn run_corollary(spec: &ExperimentSpec) -> Result<RunOutput> {
    let n = spec.u64_or("instance.n", 1_000_000)?;
    let a = spec.u64_or("tester.a", 5)?;
    let a = u32::try_from(a).map_err(|_| Error::Config("tester.a is too large".into()))?;
    let delta = parse_decimal(spec.str_or("tester.delta", "0.0001"))?;
    let rep = corollary_report(n, a, delta)?;
    let mut summary = Table::new(
        "corollary",
        &[
            "n", "a", "m", "delta", "chain_bound", "chain_bound_decimal", "series_bound",
            "threshold", "certified",
        ],
    );
    summary.push(vec![
        cell(rep.n),
        cell(rep.a),
        cell(rep.m),
        cell(rep.delta),
        cell(rep.chain_bound),
        cell(*rep.chain_bound.numer() as f64 / *rep.chain_bound.denom() as f64),
        cell(rep.series_bound),
        cell(rep.threshold),
        cell(rep.certified),
    ]);
    let mut out = RunOutput::new(Command::Corollary, summary);
    out.text = Some(rep.to_string());
    Ok(out)
}

fn run_instance(spec: &ExperimentSpec) -> Result<RunOutput> {
    let seed = spec.u64_or("experiment.seed", 0)?;
    let o = single_instance(spec, seed)?;
    let u = generators::uniform(o.n())?.p;
    let mut summary = Table::new("instance", &["generator", "n", "s", "l1_to_uniform"]);
    summary.push(vec![
        cell(spec.str_or("instance.generator", "uniform")),
        cell(o.n()),
        cell(o.s()),
        cell(l1_distance(&o.distribution(), &u)?),
    ]);
    let mut buf = Vec::new();
    write_oracle(&o, &mut buf)?;
    let mut out = RunOutput::new(Command::Instance, summary);
    out.text = Some(String::from_utf8(buf).expect("oracle files are ASCII"));
    Ok(out)
}
