//! Building oracle instances from a spec's `[instance]` section.

use std::fs;

use super::spec::ExperimentSpec;
use crate::dist::{
    generators, io::parse_oracle, l1_distance, make_oracle, random_permutation, OracleTable,
};
use crate::error::{Error, Result};
use crate::lower_bounds::{build_collision_oracles, CollisionFunction};
use crate::rng;

/// Generators accepted for single-distribution commands.
pub const SINGLE_GENERATORS: &[&str] = &["uniform", "half-support", "biased", "overlapping", "file"];

/// Generators accepted for pair commands.
pub const PAIR_GENERATORS: &[&str] = &[
    "identical",
    "biased",
    "overlapping",
    "disjoint",
    "collision-one-to-one",
    "collision-two-to-one",
    "file",
];

/// A two-oracle instance with its exact distance.
#[derive(Clone, Debug)]
pub struct PairInstance {
    pub p: OracleTable,
    pub q: OracleTable,
    /// `‖p − q‖₁`.
    pub distance: f64,
}

fn support(spec: &ExperimentSpec) -> Result<usize> {
    let n = spec.u64_or("instance.n", 1000)?;
    usize::try_from(n)
        .ok()
        .filter(|&n| n > 0 && n <= u32::MAX as usize)
        .ok_or_else(|| Error::Config(format!("instance.n = {n} is out of range")))
}

fn instance_epsilon(spec: &ExperimentSpec) -> Result<f64> {
    spec.f64_or("instance.epsilon", 0.5)
}

fn read_file(spec: &ExperimentSpec, key: &str) -> Result<OracleTable> {
    let path = spec
        .get(key)
        .ok_or_else(|| Error::Config(format!("{key} is required for generator `file`")))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
    parse_oracle(&text)
}

/// The oracle for single-distribution commands. The instance is drawn from
/// its own stream, so it does not depend on the trial count.
pub fn single_instance(spec: &ExperimentSpec, seed: u64) -> Result<OracleTable> {
    let generator = spec.str_or("instance.generator", "uniform");
    let mut r = rng::stream(seed, "instance", 0);
    let g = match generator {
        "uniform" => generators::uniform(support(spec)?)?,
        "half-support" => generators::half_support(support(spec)?)?,
        "biased" => {
            let pair = generators::biased_pair(support(spec)?, instance_epsilon(spec)?)?;
            generators::Generated { p: pair.p, s: pair.s }
        }
        "overlapping" => {
            let pair = generators::overlapping_pair(support(spec)?, instance_epsilon(spec)?)?;
            generators::Generated { p: pair.p, s: pair.s }
        }
        "file" => return read_file(spec, "instance.file"),
        other => {
            return Err(Error::Config(format!(
                "unknown generator {other:?}; expected one of {SINGLE_GENERATORS:?}"
            )))
        }
    };
    make_oracle(&g.p, g.s, &mut r)
}

pub fn pair_instance(spec: &ExperimentSpec, seed: u64) -> Result<PairInstance> {
    let generator = spec.str_or("instance.generator", "identical");
    let mut r = rng::stream(seed, "instance", 0);
    let pair = match generator {
        "identical" => {
            let g = generators::uniform(support(spec)?)?;
            let p = make_oracle(&g.p, g.s, &mut r)?;
            let q = make_oracle(&g.p, g.s, &mut r)?;
            return Ok(PairInstance { p, q, distance: 0.0 });
        }
        "biased" => generators::biased_pair(support(spec)?, instance_epsilon(spec)?)?,
        "overlapping" => generators::overlapping_pair(support(spec)?, instance_epsilon(spec)?)?,
        "disjoint" => generators::disjoint_pair(support(spec)?)?,
        "collision-one-to-one" | "collision-two-to-one" => {
            let n = support(spec)?;
            let h = if generator == "collision-one-to-one" {
                CollisionFunction::random_one_to_one(n, &mut r)?
            } else {
                CollisionFunction::random_two_to_one(n, &mut r)?
            };
            let sigma = random_permutation(n, &mut r);
            let (p, q) = build_collision_oracles(&h, &sigma)?;
            let distance = l1_distance(&p.distribution(), &q.distribution())?;
            return Ok(PairInstance { p, q, distance });
        }
        "file" => {
            let p = read_file(spec, "instance.file")?;
            let q = read_file(spec, "instance.file_q")?;
            let distance = l1_distance(&p.distribution(), &q.distribution())?;
            return Ok(PairInstance { p, q, distance });
        }
        other => {
            return Err(Error::Config(format!(
                "unknown generator {other:?}; expected one of {PAIR_GENERATORS:?}"
            )))
        }
    };
    let distance = pair.distance_f64();
    let p = make_oracle(&pair.p, pair.s, &mut r)?;
    let q = make_oracle(&pair.q, pair.s, &mut r)?;
    Ok(PairInstance { p, q, distance })
}
