use rand::Rng;

use super::verdict::{ConstantMode, Decision, RoundRecord, TestVerdict};
use crate::amp_est::{est_prob, queries_for};
use crate::dist::{Distribution, OracleTable, QueryLedger};
use crate::error::{Error, Result};

/// Refuse to run more rounds than this; the worst-case constants ask for `4e^α`.
pub const MAX_ROUNDS: u64 = 1_000_000;

/// Calibrated constants for [`UniformityParams::practical`], in units of
/// `(N/ε⁴)^{1/3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PracticalUniformity {
    pub m_coef: f64,
    pub k_coef: f64,
    /// Rejection cut is `(1 + gap·ε²)·M/N`.
    pub gap: f64,
    pub repeats: u64,
}

impl Default for PracticalUniformity {
    fn default() -> Self {
        Self {
            m_coef: 0.6,
            k_coef: 10.0,
            gap: 0.5,
            repeats: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformityParams {
    pub epsilon: f64,
    /// `M`, classical samples per round.
    pub m_samples: u64,
    /// `K`, quantum queries for the mass estimate.
    pub k_queries: u64,
    pub alpha: f64,
    /// `L`, number of rounds.
    pub l_repeats: u64,
    pub threshold: f64,
    pub mode: ConstantMode,
    pub keep_samples: bool,
}

fn ceil_sat(x: f64) -> u64 {
    if !x.is_finite() || x >= u64::MAX as f64 {
        u64::MAX
    } else {
        (x * (1.0 - 1e-12)).ceil().max(1.0) as u64
    }
}

/// `M` with `M³ = 32N/ε⁴`, rounded up.
pub fn cube_root_sample_count(support: usize, epsilon: f64) -> u64 {
    ceil_sat((32.0 * support as f64 / epsilon.powi(4)).cbrt())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 2.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("epsilon must lie in (0, 2], got {epsilon}")))
    }
}

impl UniformityParams {
    /// Worst-case constants: `M³ = 32N/ε⁴`, `α = 2⁸ε⁻⁴`, `L = 4e^α`, the
    /// cut `(1+ε²/8)M/N`, and the larger of the two query counts needed for
    /// the reject and accept halves of the argument.
    ///
    /// For ε ≤ 1 the resulting `L` and `K` saturate; [`uniformity_test`]
    /// refuses to run such parameters.
    pub fn paper(support: usize, epsilon: f64, c: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let n = support as f64;
        let m = cube_root_sample_count(support, epsilon);
        let mf = m as f64;
        let e2 = epsilon * epsilon;
        let alpha = 256.0 / epsilon.powi(4);
        let l = ceil_sat(4.0 * alpha.exp());

        let ps = ((1.0 + e2 / 2.0) * mf / n).min(1.0);
        let k_reject = queries_for(ps * e2 / 4.0, 1.0 / 6.0, ps, c);
        let omega = (-alpha).exp() / 12.0;
        let k_accept = if omega > 0.0 {
            queries_for(e2 * mf / (8.0 * n), omega, (mf / n).min(1.0), c)
        } else {
            u64::MAX
        };
        Ok(Self {
            epsilon,
            m_samples: m,
            k_queries: k_reject.max(k_accept),
            alpha,
            l_repeats: l,
            threshold: (1.0 + e2 / 8.0) * mf / n,
            mode: ConstantMode::Paper,
            keep_samples: false,
        })
    }

    pub fn practical(support: usize, epsilon: f64) -> Result<Self> {
        Self::practical_with(support, epsilon, PracticalUniformity::default())
    }

    pub fn practical_with(support: usize, epsilon: f64, k: PracticalUniformity) -> Result<Self> {
        check_epsilon(epsilon)?;
        let n = support as f64;
        let unit = (n / epsilon.powi(4)).cbrt();
        let m = ceil_sat(k.m_coef * unit);
        Ok(Self {
            epsilon,
            m_samples: m,
            k_queries: ceil_sat(k.k_coef * unit),
            alpha: 256.0 / epsilon.powi(4),
            l_repeats: k.repeats,
            threshold: (1.0 + k.gap * epsilon * epsilon) * m as f64 / n,
            mode: ConstantMode::Practical,
            keep_samples: false,
        })
    }

    /// Checks the parameters against a support of size `support`.
    pub fn validate(&self, support: usize) -> Result<()> {
        if self.m_samples == 0 || self.k_queries == 0 || self.l_repeats == 0 {
            return Err(Error::Config("M, K and L must all be at least 1".into()));
        }
        let floor = self.m_samples as f64 / support as f64;
        if self.threshold.is_nan() || self.threshold <= floor {
            return Err(Error::Config(format!(
                "threshold {} must exceed M/N = {floor}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// One round: draw `M` samples, reject on any repeat, otherwise reject iff
/// the estimate of their total mass exceeds the threshold.
///
/// On a collision no quantum queries are made and the statistic is NaN.
pub fn utest<R: Rng + ?Sized>(
    o: &OracleTable,
    params: &UniformityParams,
    round: u64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<RoundRecord> {
    let samples = o.sample_many(params.m_samples as usize, rng, ledger);
    let mut sorted = samples.clone();
    sorted.sort_unstable();
    let collision = sorted.windows(2).any(|w| w[0] == w[1]);
    sorted.dedup();
    let true_value = mass_with_multiplicity(o, &samples);
    let (statistic, decision) = if collision {
        (f64::NAN, Decision::Reject)
    } else {
        let est = est_prob(o, &samples, params.k_queries, rng, ledger)?.estimate;
        let d = if est > params.threshold {
            Decision::Reject
        } else {
            Decision::Accept
        };
        (est, d)
    };
    Ok(RoundRecord {
        round,
        statistic,
        threshold: params.threshold,
        true_value,
        collision,
        distinct: sorted.len(),
        decision,
        samples: params.keep_samples.then_some(samples),
    })
}

/// Runs `L` rounds of [`utest`] and rejects if any round rejects.
///
/// All rounds run, so the ledger always holds the full cost.
pub fn uniformity_test<R: Rng + ?Sized>(
    o: &OracleTable,
    params: &UniformityParams,
    rng: &mut R,
) -> Result<TestVerdict> {
    params.validate(o.n())?;
    if params.l_repeats > MAX_ROUNDS || params.k_queries == u64::MAX {
        return Err(Error::Infeasible(format!(
            "{} rounds of {} queries is beyond simulation (limit {} rounds)",
            params.l_repeats, params.k_queries, MAX_ROUNDS
        )));
    }
    let mut ledger = QueryLedger::new();
    let mut rounds = Vec::with_capacity(params.l_repeats as usize);
    for r in 0..params.l_repeats {
        rounds.push(utest(o, params, r, rng, &mut ledger)?);
    }
    let decision = if rounds.iter().any(|r| r.decision.is_reject()) {
        Decision::Reject
    } else {
        Decision::Accept
    };
    Ok(TestVerdict {
        decision,
        ledgers: vec![ledger],
        rounds,
    })
}

fn mass_with_multiplicity(o: &OracleTable, samples: &[u32]) -> f64 {
    let pre = o.preimage_counts();
    let hits: u64 = samples.iter().map(|&i| pre[i as usize]).sum();
    hits as f64 / o.s() as f64
}

/// `p_S = Σ_a p_{i_a}`, counting repeated samples each time.
pub fn sample_mass(p: &Distribution, samples: &[u32]) -> f64 {
    let hits: u128 = samples
        .iter()
        .map(|&i| u128::from(p.counts()[i as usize]))
        .sum();
    hits as f64 / p.denom() as f64
}

/// Elements with `p_i > 1/(2M²)`.
pub fn big_elements(p: &Distribution, m: u64) -> Vec<usize> {
    let scale = 2 * u128::from(m) * u128::from(m);
    p.counts()
        .iter()
        .enumerate()
        .filter(|&(_, &c)| scale * u128::from(c) > u128::from(p.denom()))
        .map(|(i, _)| i)
        .collect()
}

/// Total mass of [`big_elements`].
pub fn w_big(p: &Distribution, m: u64) -> f64 {
    let big: u64 = big_elements(p, m).iter().map(|&i| p.counts()[i]).sum();
    big as f64 / p.denom() as f64
}

/// `p` with every big element removed and the rest renormalised.
pub fn without_big(p: &Distribution, m: u64) -> Result<Distribution> {
    let mut counts = p.counts().to_vec();
    for i in big_elements(p, m) {
        counts[i] = 0;
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::InvalidDistribution(
            "every element is big; nothing left to renormalise".into(),
        ));
    }
    Distribution::from_counts(counts)
}
