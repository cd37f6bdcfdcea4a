//! Query-complexity scaling studies.
//!
//! For each `N` the tester's budget multiplier `λ` is swept geometrically
//! until both error rates (rejecting the null instance, accepting the
//! alternative) are at most the target. The mean total ledger cost at that
//! `λ` is recorded, and `ln(cost)` is regressed on `ln N`.

use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use super::spec::{parse_n_values, ExperimentSpec};
use super::stats::{least_squares, LinearFit};
use crate::classical::{classical_statdiff_plugin, classical_uniformity_test};
use crate::dist::{generators, make_oracle, OracleTable};
use crate::error::{Error, Result};
use crate::rng;
use crate::testers::{
    est_dist, uniformity_test, PracticalStatDiff, PracticalUniformity, StatDiffParams,
    UniformityParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalingTester {
    /// Quantum uniformity; `λ` scales `K`.
    Uniformity,
    /// Collision tester; `m = ⌈λ√N⌉`.
    BaselineUniformity,
    /// Quantum statistical difference; `λ` scales `m_inner`.
    StatDiff,
    /// Plug-in statistical difference; `m = ⌈λ√N⌉` per distribution.
    BaselineStatDiff,
}

impl ScalingTester {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalingTester::Uniformity => "uniformity",
            ScalingTester::BaselineUniformity => "baseline-uniformity",
            ScalingTester::StatDiff => "statdiff",
            ScalingTester::BaselineStatDiff => "baseline-statdiff",
        }
    }
}

impl FromStr for ScalingTester {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniformity" => Ok(ScalingTester::Uniformity),
            "baseline-uniformity" => Ok(ScalingTester::BaselineUniformity),
            "statdiff" | "estdist" => Ok(ScalingTester::StatDiff),
            "baseline-statdiff" => Ok(ScalingTester::BaselineStatDiff),
            other => Err(Error::Config(format!(
                "unknown scaling tester {other:?}; expected uniformity, baseline-uniformity, statdiff or baseline-statdiff"
            ))),
        }
    }
}

impl fmt::Display for ScalingTester {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingConfig {
    pub tester: ScalingTester,
    pub n_values: Vec<u64>,
    /// Distance of the alternative instance: `ε` of `biased_pair`.
    pub instance_epsilon: f64,
    /// Uniformity: the tester's `ε`. Statistical difference: the accuracy
    /// `|x̃ − d/2| < ε` that counts as a success.
    pub epsilon: f64,
    pub tau: f64,
    pub target_error: f64,
    pub lambda_start: f64,
    pub lambda_ratio: f64,
    pub lambda_steps: u32,
    pub trials: u64,
    pub seed: u64,
    pub uniformity: PracticalUniformity,
    pub statdiff: PracticalStatDiff,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            tester: ScalingTester::Uniformity,
            n_values: vec![1_000, 10_000, 100_000, 1_000_000],
            instance_epsilon: 0.5,
            epsilon: 0.5,
            tau: 0.1,
            target_error: 1.0 / 3.0,
            lambda_start: 1.0 / 16.0,
            lambda_ratio: 2f64.powf(0.25),
            lambda_steps: 64,
            trials: 200,
            seed: 0,
            uniformity: PracticalUniformity::default(),
            statdiff: PracticalStatDiff::default(),
        }
    }
}

impl ScalingConfig {
    pub fn from_spec(spec: &ExperimentSpec) -> Result<Self> {
        let d = Self::default();
        let tester: ScalingTester = spec.str_or("scaling.tester", "uniformity").parse()?;
        let default_eps = match tester {
            ScalingTester::StatDiff | ScalingTester::BaselineStatDiff => 0.1,
            _ => 0.5,
        };
        let n_values = match spec.get("scaling.n_values") {
            Some(v) => parse_n_values(v)?,
            None => d.n_values,
        };
        let cfg = Self {
            tester,
            n_values,
            instance_epsilon: spec.f64_or("instance.epsilon", d.instance_epsilon)?,
            epsilon: spec.f64_or("tester.epsilon", default_eps)?,
            tau: spec.f64_or("tester.tau", d.tau)?,
            target_error: spec.f64_or("scaling.target_error", d.target_error)?,
            lambda_start: spec.f64_or("scaling.lambda_start", d.lambda_start)?,
            lambda_ratio: spec.f64_or("scaling.lambda_ratio", d.lambda_ratio)?,
            lambda_steps: spec.u64_or("scaling.lambda_steps", u64::from(d.lambda_steps))? as u32,
            trials: spec.u64_or("scaling.trials", spec.u64_or("experiment.trials", d.trials)?)?,
            seed: spec.u64_or("experiment.seed", d.seed)?,
            uniformity: PracticalUniformity {
                m_coef: spec.f64_or("tester.m_coef", d.uniformity.m_coef)?,
                k_coef: spec.f64_or("tester.k_coef", d.uniformity.k_coef)?,
                gap: spec.f64_or("tester.gap", d.uniformity.gap)?,
                repeats: spec.u64_or("tester.repeats", d.uniformity.repeats)?,
            },
            statdiff: PracticalStatDiff {
                n_coef: spec.f64_or("tester.n_coef", d.statdiff.n_coef)?,
                inner_coef: spec.f64_or("tester.inner_coef", d.statdiff.inner_coef)?,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.lambda_steps == 0 {
            return Err(Error::Config("scaling needs trials ≥ 1 and lambda_steps ≥ 1".into()));
        }
        if !(self.lambda_start > 0.0 && self.lambda_ratio > 1.0) {
            return Err(Error::Config("lambda_start must be positive and lambda_ratio > 1".into()));
        }
        if !(self.target_error > 0.0 && self.target_error < 1.0) {
            return Err(Error::Config("target_error must lie in (0, 1)".into()));
        }
        if self.n_values.iter().any(|&n| n < 2 || n % 2 != 0) {
            return Err(Error::Config("every N must be even and at least 2".into()));
        }
        Ok(())
    }

    pub fn lambda(&self, index: u32) -> f64 {
        self.lambda_start * self.lambda_ratio.powi(index as i32)
    }
}

/// Error rates and cost of one `(N, λ)` cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub lambda: f64,
    pub err_null: f64,
    pub err_alt: f64,
    pub mean_queries: f64,
}

impl Measurement {
    pub fn max_error(&self) -> f64 {
        self.err_null.max(self.err_alt)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub n: u64,
    pub lambda_index: u32,
    pub measurement: Measurement,
    /// The sweep stopped at its first value, so the true requirement may be
    /// lower than measured.
    pub saturated: bool,
    /// Every step of the sweep, in order.
    pub sweep: Vec<Measurement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingResult {
    pub tester: ScalingTester,
    pub points: Vec<ScalingPoint>,
    /// `N` values left out of the fit.
    pub excluded: Vec<u64>,
    pub fit: LinearFit,
}

struct Instances {
    null: (OracleTable, OracleTable),
    alt: (OracleTable, OracleTable),
    /// Half the distance of the alternative pair.
    alt_half_distance: f64,
}

fn build(cfg: &ScalingConfig, n: u64) -> Result<Instances> {
    let n = n as usize;
    let mut r = rng::stream(cfg.seed, "scaling-instance", n as u64);
    let u = generators::uniform(n)?;
    let b = generators::biased_pair(n, cfg.instance_epsilon)?;
    let ou = make_oracle(&u.p, u.s, &mut r)?;
    let ou2 = make_oracle(&u.p, u.s, &mut r)?;
    let ob = make_oracle(&b.p, b.s, &mut r)?;
    let obq = make_oracle(&b.q, b.s, &mut r)?;
    Ok(Instances {
        null: (ou, ou2),
        alt: (ob, obq),
        alt_half_distance: b.distance_f64() / 2.0,
    })
}

fn sqrt_budget(lambda: f64, n: u64, floor: u64) -> u64 {
    ((lambda * (n as f64).sqrt()).ceil() as u64).max(floor)
}

/// Runs `trials` trials on each instance at multiplier `lambda`.
fn measure_with(
    cfg: &ScalingConfig,
    inst: &Instances,
    n: u64,
    lambda: f64,
    index: u32,
) -> Result<Measurement> {
    let label = format!("scaling/{}/{n}/{index}", cfg.tester);
    let run = |alt: bool, t: u64| -> Result<(bool, u64)> {
        let mut r = rng::stream(cfg.seed, &label, 2 * t + u64::from(alt));
        let (op, oq) = if alt { &inst.alt } else { &inst.null };
        let nn = n as usize;
        match cfg.tester {
            ScalingTester::Uniformity => {
                let k = PracticalUniformity {
                    k_coef: cfg.uniformity.k_coef * lambda,
                    ..cfg.uniformity
                };
                let params = UniformityParams::practical_with(nn, cfg.epsilon, k)?;
                let v = uniformity_test(op, &params, &mut r)?;
                Ok((v.decision.is_reject() != alt, v.total_queries()))
            }
            ScalingTester::BaselineUniformity => {
                let v = classical_uniformity_test(op, sqrt_budget(lambda, n, 2), cfg.epsilon, &mut r)?;
                Ok((v.decision.is_reject() != alt, v.total_queries()))
            }
            ScalingTester::StatDiff => {
                let k = PracticalStatDiff {
                    inner_coef: cfg.statdiff.inner_coef * lambda,
                    ..cfg.statdiff
                };
                let params = StatDiffParams::practical_with(nn, cfg.epsilon, cfg.tau, k)?;
                let rep = est_dist(op, oq, &params, &mut r)?;
                let truth = if alt { inst.alt_half_distance } else { 0.0 };
                Ok(((rep.estimate - truth).abs() >= cfg.epsilon, rep.total_queries()))
            }
            ScalingTester::BaselineStatDiff => {
                let rep = classical_statdiff_plugin(op, oq, sqrt_budget(lambda, n, 1), &mut r)?;
                let truth = if alt { inst.alt_half_distance } else { 0.0 };
                Ok(((rep.estimate - truth).abs() >= cfg.epsilon, rep.total_queries()))
            }
        }
    };
    let results: Vec<(bool, bool, u64)> = (0..2 * cfg.trials)
        .into_par_iter()
        .map(|i| {
            let alt = i % 2 == 1;
            run(alt, i / 2).map(|(err, q)| (alt, err, q))
        })
        .collect::<Result<_>>()?;
    let t = cfg.trials as f64;
    let err_null = results.iter().filter(|r| !r.0 && r.1).count() as f64 / t;
    let err_alt = results.iter().filter(|r| r.0 && r.1).count() as f64 / t;
    let mean_queries = results.iter().map(|r| r.2 as f64).sum::<f64>() / (2.0 * t);
    Ok(Measurement {
        lambda,
        err_null,
        err_alt,
        mean_queries,
    })
}

/// One trial-farm measurement at a given `(N, λ)`.
pub fn measure(cfg: &ScalingConfig, n: u64, lambda: f64) -> Result<Measurement> {
    let inst = build(cfg, n)?;
    measure_with(cfg, &inst, n, lambda, 0)
}

/// Sweeps `λ` at one `N` until both error rates meet the target.
pub fn calibrate_point(cfg: &ScalingConfig, n: u64) -> Result<ScalingPoint> {
    let inst = build(cfg, n)?;
    let mut sweep = Vec::new();
    for index in 0..cfg.lambda_steps {
        let m = measure_with(cfg, &inst, n, cfg.lambda(index), index)?;
        sweep.push(m);
        if m.max_error() <= cfg.target_error {
            return Ok(ScalingPoint {
                n,
                lambda_index: index,
                measurement: m,
                saturated: index == 0,
                sweep,
            });
        }
    }
    Err(Error::CalibrationExhausted(format!(
        "{} at N = {n}: error above {} up to λ = {}",
        cfg.tester,
        cfg.target_error,
        cfg.lambda(cfg.lambda_steps - 1)
    )))
}

/// Calibrates every `N` and fits the log-log slope.
///
/// The smallest `N` is left out of the fit when its sweep saturated at the
/// lower cap and at least four points remain.
pub fn run_scaling(cfg: &ScalingConfig) -> Result<ScalingResult> {
    cfg.validate()?;
    let mut ns = cfg.n_values.clone();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 4 {
        return Err(Error::Config(format!("scaling needs at least 4 values of N, got {}", ns.len())));
    }
    if (ns[ns.len() - 1] as f64 / ns[0] as f64) < 100.0 {
        return Err(Error::Config("the values of N must span at least two decades".into()));
    }
    let points = ns
        .iter()
        .map(|&n| calibrate_point(cfg, n))
        .collect::<Result<Vec<_>>>()?;
    let mut excluded = Vec::new();
    if points[0].saturated && points.len() > 4 {
        excluded.push(points[0].n);
    }
    let used: Vec<&ScalingPoint> = points.iter().filter(|p| !excluded.contains(&p.n)).collect();
    let x: Vec<f64> = used.iter().map(|p| (p.n as f64).ln()).collect();
    let y: Vec<f64> = used.iter().map(|p| p.measurement.mean_queries.ln()).collect();
    let fit = least_squares(&x, &y).ok_or_else(|| Error::Config("degenerate scaling fit".into()))?;
    Ok(ScalingResult {
        tester: cfg.tester,
        points,
        excluded,
        fit,
    })
}
