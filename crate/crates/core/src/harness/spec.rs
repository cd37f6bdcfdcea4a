//! Experiment specifications: `[section]` headers followed by `key = value`
//! lines. Every key must be known; later assignments override earlier ones.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Recognised keys, by section.
pub const KNOWN_KEYS: &[(&str, &[&str])] = &[
    ("experiment", &["command", "seed", "trials", "mode", "out", "diagnostics"]),
    ("instance", &["generator", "n", "epsilon", "file", "file_q", "target", "target_size"]),
    (
        "tester",
        &[
            "epsilon", "tau", "c", "delta", "omega", "pa_upper", "m", "m_samples", "k_queries",
            "l_repeats", "threshold", "m_coef", "k_coef", "gap", "repeats", "rounds", "coef",
            "n_samples", "m_inner", "n_coef", "inner_coef", "samples", "sample_coef", "a",
            "rate", "tolerance",
        ],
    ),
    (
        "scaling",
        &[
            "tester", "n_values", "target_error", "lambda_start", "lambda_ratio", "lambda_steps",
            "trials",
        ],
    ),
];

/// The experiment commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    EstProb,
    EstDist,
    Uniformity,
    Orthogonality,
    BaselineUniformity,
    BaselineStatDiff,
    BaselineOrthogonality,
    Scaling,
    Calibrate,
    LbCollision,
    LbFingerprint,
    Corollary,
    Instance,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::EstProb,
        Command::EstDist,
        Command::Uniformity,
        Command::Orthogonality,
        Command::BaselineUniformity,
        Command::BaselineStatDiff,
        Command::BaselineOrthogonality,
        Command::Scaling,
        Command::Calibrate,
        Command::LbCollision,
        Command::LbFingerprint,
        Command::Corollary,
        Command::Instance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::EstProb => "estprob",
            Command::EstDist => "estdist",
            Command::Uniformity => "uniformity",
            Command::Orthogonality => "orthogonality",
            Command::BaselineUniformity => "baseline-uniformity",
            Command::BaselineStatDiff => "baseline-statdiff",
            Command::BaselineOrthogonality => "baseline-orthogonality",
            Command::Scaling => "scaling",
            Command::Calibrate => "calibrate",
            Command::LbCollision => "lb-collision",
            Command::LbFingerprint => "lb-fingerprint",
            Command::Corollary => "corollary",
            Command::Instance => "instance",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A validated set of `section.key = value` settings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExperimentSpec {
    values: BTreeMap<String, String>,
}

fn check_key(section: &str, key: &str) -> Result<()> {
    let keys = KNOWN_KEYS
        .iter()
        .find(|(s, _)| *s == section)
        .ok_or_else(|| Error::Config(format!("unknown section [{section}]")))?
        .1;
    if keys.contains(&key) {
        Ok(())
    } else {
        Err(Error::Config(format!("unknown key `{key}` in section [{section}]")))
    }
}

impl ExperimentSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses a spec file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = Self::new();
        let mut section: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if !KNOWN_KEYS.iter().any(|(s, _)| *s == name) {
                    return Err(Error::Config(format!(
                        "line {}: unknown section [{name}]",
                        lineno + 1
                    )));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let section = section.as_deref().ok_or_else(|| {
                Error::Config(format!("line {}: key outside of any [section]", lineno + 1))
            })?;
            spec.set(section, key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(spec)
    }

    pub fn set(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        check_key(section, key)?;
        self.values.insert(format!("{section}.{key}"), value.to_string());
        Ok(())
    }

    /// Applies a `section.key=value` override.
    pub fn set_dotted(&mut self, assignment: &str) -> Result<()> {
        let (path, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected section.key=value, got {assignment:?}")))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::Config(format!("expected section.key, got {path:?}")))?;
        self.set(section, key, value.trim())
    }

    /// Later settings win.
    pub fn merge(&mut self, other: &ExperimentSpec) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, path: &str) -> Option<&str> {
        self.values.get(path).map(String::as_str)
    }

    pub fn has(&self, path: &str) -> bool {
        self.values.contains_key(path)
    }

    pub fn str_or<'a>(&'a self, path: &str, default: &'a str) -> &'a str {
        self.get(path).unwrap_or(default)
    }

    pub fn f64_opt(&self, path: &str) -> Result<Option<f64>> {
        self.get(path)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Config(format!("{path}: expected a number, got {v:?}")))
            })
            .transpose()
    }

    pub fn f64_or(&self, path: &str, default: f64) -> Result<f64> {
        Ok(self.f64_opt(path)?.unwrap_or(default))
    }

    /// Integers may be written as `100000`, `1e5` or `1.0e5`.
    pub fn u64_opt(&self, path: &str) -> Result<Option<u64>> {
        self.get(path).map(|v| parse_count(v).map_err(|e| Error::Config(format!("{path}: {e}")))).transpose()
    }

    pub fn u64_or(&self, path: &str, default: u64) -> Result<u64> {
        Ok(self.u64_opt(path)?.unwrap_or(default))
    }

    pub fn command(&self) -> Result<Command> {
        self.get("experiment.command")
            .ok_or_else(|| Error::Config("no command given".into()))?
            .parse()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Parses a non-negative integer, allowing scientific notation.
pub fn parse_count(v: &str) -> std::result::Result<u64, String> {
    if let Ok(x) = v.parse::<u64>() {
        return Ok(x);
    }
    match v.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 => Ok(x as u64),
        _ => Err(format!("expected a non-negative integer, got {v:?}")),
    }
}

/// Parses `1e3..1e6` (every power of ten in the range) or a comma list.
pub fn parse_n_values(v: &str) -> Result<Vec<u64>> {
    let bad = |e: String| Error::Config(format!("n_values: {e}"));
    if let Some((lo, hi)) = v.split_once("..") {
        let lo = parse_count(lo.trim()).map_err(bad)?;
        let hi = parse_count(hi.trim()).map_err(bad)?;
        if lo == 0 || lo > hi {
            return Err(bad(format!("empty range {v:?}")));
        }
        let mut out = Vec::new();
        let mut x = lo;
        while x <= hi {
            out.push(x);
            x = x.checked_mul(10).ok_or_else(|| bad("range overflows".into()))?;
        }
        Ok(out)
    } else {
        v.split(',')
            .map(|s| parse_count(s.trim()).map_err(bad))
            .collect()
    }
}
