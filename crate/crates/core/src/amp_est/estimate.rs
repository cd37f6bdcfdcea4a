use rand::Rng;

use super::outcome::{estimate_for_outcome, OutcomeLaw};
use crate::dist::{OracleTable, QueryLedger};
use crate::error::{Error, Result};

/// Constant `c` in the query bound `m ≥ c√p_A/(ωδ)`, `m ≥ c/(ω√δ)`.
///
/// Produced by [`calibrate_constant`](super::calibrate_constant) on
/// [`DEFAULT_GRID`](super::DEFAULT_GRID); the seed and sweep are recorded in
/// `config/estprob_calibration.txt`.
pub const CALIBRATED_C: f64 = 1.189_207_115_002_720_4;

/// Output of one amplitude-estimation run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbEstimate {
    /// `sin²(π·y/m)`.
    pub estimate: f64,
    /// The measured register value `y ∈ {0, …, m−1}`.
    pub raw_outcome: u64,
    /// Grover-rotation applications charged for this run.
    pub m: u64,
    target_set_mass: f64,
}

impl ProbEstimate {
    /// The true marked mass. For harness bookkeeping only; testers must not
    /// read it.
    pub fn true_mass(&self) -> f64 {
        self.target_set_mass
    }
}

/// Estimates the total mass of `target` under the distribution generated by
/// `o`, using `m` oracle applications.
///
/// Duplicates in `target` are ignored. Charges exactly `m` quantum
/// applications to `ledger`. When no input maps into `target` the estimate is
/// exactly zero.
pub fn est_prob<R: Rng + ?Sized>(
    o: &OracleTable,
    target: &[u32],
    m: u64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<ProbEstimate> {
    if o.s() == 0 {
        return Err(Error::EmptyOracle);
    }
    if m == 0 {
        return Err(Error::Precondition("est_prob needs m ≥ 1".into()));
    }
    let mass = o.preimage_count(target) as f64 / o.s() as f64;
    let y = OutcomeLaw::new(mass, m).sample(rng);
    ledger.charge_quantum(m);
    Ok(ProbEstimate {
        estimate: estimate_for_outcome(y, m),
        raw_outcome: y,
        m,
        target_set_mass: mass,
    })
}

/// Smallest `m` with `m ≥ c√p/(ωδ)` and `m ≥ c/(ω√δ)`, where `p` is an upper
/// bound on the marked mass. Saturates at `u64::MAX`.
///
/// # Panics
///
/// Panics unless `δ > 0`, `0 < ω ≤ 1/2`, `0 ≤ p ≤ 1` and `c > 0`.
pub fn queries_for(delta: f64, omega: f64, pa_upper: f64, c: f64) -> u64 {
    assert!(delta > 0.0, "precision must be positive");
    assert!(omega > 0.0 && omega <= 0.5, "failure probability must lie in (0, 1/2]");
    assert!((0.0..=1.0).contains(&pa_upper), "mass bound must lie in [0, 1]");
    assert!(c > 0.0, "constant must be positive");
    let first = c * pa_upper.sqrt() / (omega * delta);
    let second = c / (omega * delta.sqrt());
    // Shave rounding noise so exact products such as 40.000000000000004 do
    // not round up to the next integer.
    let m = (first.max(second) * (1.0 - 1e-12)).ceil();
    if m >= u64::MAX as f64 {
        u64::MAX
    } else {
        (m as u64).max(1)
    }
}

/// A `(δ, ω)` target together with the query count that meets it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstProbPlan {
    pub delta: f64,
    pub omega: f64,
    pub c: f64,
    pub m: u64,
}

impl EstProbPlan {
    pub fn new(delta: f64, omega: f64, pa_upper: f64, c: f64) -> Self {
        Self {
            delta,
            omega,
            c,
            m: queries_for(delta, omega, pa_upper, c),
        }
    }
}
