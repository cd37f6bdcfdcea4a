//! Calibration of the constant `c` in the amplitude-estimation query bound.
//!
//! For each candidate `c` of a geometric sweep, every grid cell `(p_A, δ, ω)`
//! is run with `m = queries_for(δ, ω, p_A, c)` and the empirical coverage
//! `Pr[|p̃_A − p_A| ≤ δ]` must clear `1 − ω` by a one-sided 99% binomial
//! margin. The smallest passing `c` is returned.

use rayon::prelude::*;
use std::fmt;

use super::estimate::queries_for;
use super::outcome::{estimate_for_outcome, OutcomeLaw};
use crate::error::{Error, Result};
use crate::rng;

/// One-sided 99% normal quantile.
const Z_99: f64 = 2.326_347_874_040_841;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationCell {
    pub pa: f64,
    pub delta: f64,
    pub omega: f64,
}

const fn cell(pa: f64, delta: f64, omega: f64) -> CalibrationCell {
    CalibrationCell { pa, delta, omega }
}

macro_rules! grid_for {
    ($($pa:expr),*) => {
        [$(
            cell($pa, 0.2 * $pa, 0.05), cell($pa, 0.2 * $pa, 0.1), cell($pa, 0.2 * $pa, 0.25),
            cell($pa, 0.5 * $pa, 0.05), cell($pa, 0.5 * $pa, 0.1), cell($pa, 0.5 * $pa, 0.25),
            cell($pa, 0.05, 0.05), cell($pa, 0.05, 0.1), cell($pa, 0.05, 0.25),
        )*]
    };
}

/// `p_A ∈ {0.01, 0.1, 0.5}` × `δ ∈ {0.2 p_A, 0.5 p_A, 0.05}` × `ω ∈ {0.05, 0.1, 0.25}`.
pub const DEFAULT_GRID: [CalibrationCell; 27] = grid_for!(0.01, 0.1, 0.5);

/// Candidates `start · ratioᵏ` for `k = 0..steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationSweep {
    pub start: f64,
    pub ratio: f64,
    pub steps: u32,
}

impl Default for CalibrationSweep {
    fn default() -> Self {
        Self {
            start: 0.125,
            ratio: 2f64.powf(0.25),
            steps: 41,
        }
    }
}

impl CalibrationSweep {
    pub fn value(&self, k: u32) -> f64 {
        self.start * self.ratio.powi(k as i32)
    }
}

/// A calibration result together with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationRecord {
    pub c: f64,
    pub seed: u64,
    pub trials: u64,
    pub sweep: CalibrationSweep,
    pub grid: Vec<CalibrationCell>,
}

/// True when `successes` out of `trials` clears `target` by the one-sided
/// 99% normal margin.
pub(crate) fn clears_with_margin(successes: u64, trials: u64, target: f64) -> bool {
    let n = trials as f64;
    let needed = n * target + Z_99 * (n * target * (1.0 - target)).sqrt();
    successes as f64 >= needed
}

fn cell_successes(cell: &CalibrationCell, c: f64, trials: u64, seed: u64, index: u64) -> u64 {
    let m = queries_for(cell.delta, cell.omega, cell.pa, c);
    let law = OutcomeLaw::new(cell.pa, m);
    let mut r = rng::stream(seed, "estprob-calibration", index);
    (0..trials)
        .filter(|_| (estimate_for_outcome(law.sample(&mut r), m) - cell.pa).abs() <= cell.delta)
        .count() as u64
}

pub fn calibrate_constant(
    grid: &[CalibrationCell],
    trials: u64,
    sweep: &CalibrationSweep,
    seed: u64,
) -> Result<CalibrationRecord> {
    if trials == 0 {
        return Err(Error::Precondition("calibration needs at least one trial".into()));
    }
    for k in 0..sweep.steps {
        let c = sweep.value(k);
        let all_pass = grid.par_iter().enumerate().all(|(i, cell)| {
            let index = (u64::from(k) << 32) | i as u64;
            let hits = cell_successes(cell, c, trials, seed, index);
            clears_with_margin(hits, trials, 1.0 - cell.omega)
        });
        if all_pass {
            return Ok(CalibrationRecord {
                c,
                seed,
                trials,
                sweep: *sweep,
                grid: grid.to_vec(),
            });
        }
    }
    Err(Error::CalibrationExhausted(format!(
        "no c up to {} meets every cell",
        sweep.value(sweep.steps.saturating_sub(1))
    )))
}

impl fmt::Display for CalibrationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "c={}", self.c)?;
        let cells: Vec<String> = self
            .grid
            .iter()
            .map(|c| format!("{}:{}:{}", c.pa, c.delta, c.omega))
            .collect();
        writeln!(f, "grid={}", cells.join(","))?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "trials={}", self.trials)?;
        writeln!(
            f,
            "sweep={}:{}:{}",
            self.sweep.start, self.sweep.ratio, self.sweep.steps
        )
    }
}

impl std::str::FromStr for CalibrationRecord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut c = None;
        let mut grid = None;
        let mut seed = None;
        let mut trials = None;
        let mut sweep = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {line:?}")))?;
            let value = value.trim();
            match key.trim() {
                "c" => c = Some(parse_f64(value)?),
                "seed" => seed = Some(value.parse().map_err(|_| bad("seed", value))?),
                "trials" => trials = Some(value.parse().map_err(|_| bad("trials", value))?),
                "grid" => {
                    let cells = value
                        .split(',')
                        .map(|cell| {
                            let parts: Vec<&str> = cell.split(':').collect();
                            match parts.as_slice() {
                                [pa, d, w] => Ok(CalibrationCell {
                                    pa: parse_f64(pa)?,
                                    delta: parse_f64(d)?,
                                    omega: parse_f64(w)?,
                                }),
                                _ => Err(bad("grid cell", cell)),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    grid = Some(cells);
                }
                "sweep" => {
                    let parts: Vec<&str> = value.split(':').collect();
                    sweep = match parts.as_slice() {
                        [s, r, n] => Some(CalibrationSweep {
                            start: parse_f64(s)?,
                            ratio: parse_f64(r)?,
                            steps: n.parse().map_err(|_| bad("sweep steps", n))?,
                        }),
                        _ => return Err(bad("sweep", value)),
                    };
                }
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        Ok(CalibrationRecord {
            c: c.ok_or_else(|| missing("c"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            trials: trials.ok_or_else(|| missing("trials"))?,
            sweep: sweep.unwrap_or_default(),
            grid: grid.ok_or_else(|| missing("grid"))?,
        })
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| bad("number", s))
}

fn bad(what: &str, v: &str) -> Error {
    Error::Parse(format!("invalid {what}: {v:?}"))
}

fn missing(key: &str) -> Error {
    Error::Parse(format!("missing key {key:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_grid_takes_first_sweep_value() {
        let grid = [cell(0.0, 0.01, 0.05), cell(0.0, 0.2, 0.25)];
        let sweep = CalibrationSweep::default();
        let rec = calibrate_constant(&grid, 2000, &sweep, 3).unwrap();
        assert_eq!(rec.c, sweep.start);
    }

    #[test]
    fn exhausted_sweep_is_an_error() {
        let grid = [cell(0.5, 0.1, 0.05)];
        let sweep = CalibrationSweep {
            start: 1e-3,
            ratio: 1.1,
            steps: 3,
        };
        assert!(matches!(
            calibrate_constant(&grid, 1000, &sweep, 1),
            Err(Error::CalibrationExhausted(_))
        ));
    }

    #[test]
    fn margin_rule() {
        assert!(clears_with_margin(1000, 1000, 0.95));
        assert!(!clears_with_margin(950, 1000, 0.95));
        assert!(clears_with_margin(967, 1000, 0.95));
    }

    #[test]
    fn record_text_round_trip() {
        let rec = CalibrationRecord {
            c: 1.189207115002721,
            seed: 42,
            trials: 10,
            sweep: CalibrationSweep::default(),
            grid: DEFAULT_GRID.to_vec(),
        };
        let parsed: CalibrationRecord = rec.to_string().parse().unwrap();
        assert_eq!(parsed, rec);
        assert!("c=1\nseed=2\n".parse::<CalibrationRecord>().is_err());
        assert!("c=1\nbogus=2\n".parse::<CalibrationRecord>().is_err());
    }
}
