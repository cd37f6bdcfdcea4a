use rand::Rng;

use super::verdict::{ConstantMode, Decision, RoundRecord, TestVerdict};
use crate::amp_est::{est_prob, queries_for};
use crate::dist::{OracleTable, QueryLedger};
use crate::error::{Error, Result};

/// Rounds used by the amplified test unless configured otherwise.
pub const DEFAULT_ROUNDS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthogonalityParams {
    pub epsilon: f64,
    /// `M`, classical samples from `p` per round.
    pub m_samples: u64,
    /// `K`, quantum queries to `q` per round.
    pub k_queries: u64,
    /// Reject when `q̃_A ≥ threshold`.
    pub threshold: f64,
    pub rounds: u64,
    pub mode: ConstantMode,
    pub keep_samples: bool,
}

fn cut(epsilon: f64, m: u64, support: usize) -> f64 {
    epsilon.powi(3) * m as f64 / (4096.0 * support as f64)
}

/// The value `q_A` exceeds with probability at least 1/2 when
/// `‖p − q‖₁ ≤ 2 − ε` and `M ≥ 2⁹/ε²`; twice the rejection cut.
pub fn overlap_floor(epsilon: f64, m: u64, support: usize) -> f64 {
    2.0 * cut(epsilon, m, support)
}

impl OrthogonalityParams {
    /// `M = K`, the smallest value that is at least `N^{1/3}/ε`, at least
    /// `2⁹/ε²`, and enough for [`est_prob`] to resolve `q_A/2` at the floor
    /// value of `q_A` with failure probability 1/2.
    pub fn paper(support: usize, epsilon: f64, c: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 2.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 2], got {epsilon}")));
        }
        let n = support as f64;
        let mut m = ((n.cbrt() / epsilon).ceil() as u64).max((512.0 / (epsilon * epsilon)).ceil() as u64);
        loop {
            let floor = overlap_floor(epsilon, m, support).min(1.0);
            let k = queries_for(floor / 2.0, 0.5, floor, c);
            if k <= m {
                break;
            }
            m = k;
        }
        Ok(Self {
            epsilon,
            m_samples: m,
            k_queries: m,
            threshold: cut(epsilon, m, support),
            rounds: DEFAULT_ROUNDS,
            mode: ConstantMode::Paper,
            keep_samples: false,
        })
    }

    /// `M = K = ⌈coef · N^{1/3}/ε⌉` with the same cut.
    pub fn practical(support: usize, epsilon: f64, coef: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 2.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 2], got {epsilon}")));
        }
        let m = ((coef * (support as f64).cbrt() / epsilon).ceil() as u64).max(1);
        Ok(Self {
            epsilon,
            m_samples: m,
            k_queries: m,
            threshold: cut(epsilon, m, support),
            rounds: DEFAULT_ROUNDS,
            mode: ConstantMode::Practical,
            keep_samples: false,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_samples == 0 || self.k_queries == 0 || self.rounds == 0 {
            return Err(Error::Config("M, K and the round count must be at least 1".into()));
        }
        if self.threshold.is_nan() || self.threshold <= 0.0 {
            return Err(Error::Config("threshold must be positive".into()));
        }
        Ok(())
    }
}

/// One round: sample `M` elements from `p`, estimate the `q`-mass of the
/// distinct ones with `K` queries, reject iff the estimate reaches the cut.
///
/// When the supports are disjoint the estimate is exactly zero, so this
/// never rejects an orthogonal pair.
pub fn otest<R: Rng + ?Sized>(
    op: &OracleTable,
    oq: &OracleTable,
    params: &OrthogonalityParams,
    round: u64,
    rng: &mut R,
    ledgers: &mut [QueryLedger; 2],
) -> Result<RoundRecord> {
    if op.n() != oq.n() {
        return Err(Error::SupportMismatch {
            left: op.n(),
            right: oq.n(),
        });
    }
    let samples = op.sample_many(params.m_samples as usize, rng, &mut ledgers[0]);
    let mut set = samples.clone();
    set.sort_unstable();
    set.dedup();
    let est = est_prob(oq, &set, params.k_queries, rng, &mut ledgers[1])?;
    let decision = if est.estimate >= params.threshold {
        Decision::Reject
    } else {
        Decision::Accept
    };
    Ok(RoundRecord {
        round,
        statistic: est.estimate,
        threshold: params.threshold,
        true_value: est.true_mass(),
        collision: set.len() < samples.len(),
        distinct: set.len(),
        decision,
        samples: params.keep_samples.then_some(samples),
    })
}

/// Repeats [`otest`] `rounds` times and rejects if any round rejects.
pub fn orthogonality_test<R: Rng + ?Sized>(
    op: &OracleTable,
    oq: &OracleTable,
    params: &OrthogonalityParams,
    rng: &mut R,
) -> Result<TestVerdict> {
    params.validate()?;
    let mut ledgers = [QueryLedger::new(), QueryLedger::new()];
    let mut rounds = Vec::with_capacity(params.rounds.min(1 << 20) as usize);
    for r in 0..params.rounds {
        rounds.push(otest(op, oq, params, r, rng, &mut ledgers)?);
    }
    let decision = if rounds.iter().any(|r| r.decision.is_reject()) {
        Decision::Reject
    } else {
        Decision::Accept
    };
    Ok(TestVerdict {
        decision,
        ledgers: ledgers.to_vec(),
        rounds,
    })
}
