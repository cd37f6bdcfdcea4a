use rand::Rng;

use super::verdict::ConstantMode;
use crate::amp_est::est_prob;
use crate::dist::{OracleTable, QueryLedger};
use crate::error::{Error, Result};

/// Calibrated constants for [`StatDiffParams::practical`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PracticalStatDiff {
    /// `n = ⌈n_coef · ln(2/τ) / ε²⌉`.
    pub n_coef: f64,
    /// `m_inner = ⌈inner_coef · √N / ε⌉`.
    pub inner_coef: f64,
}

impl Default for PracticalStatDiff {
    fn default() -> Self {
        Self {
            n_coef: 1.0,
            inner_coef: 4.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatDiffParams {
    pub epsilon: f64,
    pub tau: f64,
    /// Number of outer samples from the mixture `(p+q)/2`.
    pub n: u64,
    /// Queries per singleton probability estimate.
    pub m_inner: u64,
    pub mode: ConstantMode,
}

fn ceil_u64(x: f64) -> u64 {
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        (x.ceil() as u64).max(1)
    }
}

fn check_eps_tau(epsilon: f64, tau: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Config(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Config(format!("tau must lie in (0, 1), got {tau}")));
    }
    Ok(())
}

impl StatDiffParams {
    /// `n = 27/(τε²)` and `m_inner = c√N/(ε⁶τ⁴)`.
    pub fn paper(support: usize, epsilon: f64, tau: f64, c: f64) -> Result<Self> {
        check_eps_tau(epsilon, tau)?;
        Ok(Self {
            epsilon,
            tau,
            n: ceil_u64(27.0 / (tau * epsilon * epsilon)),
            m_inner: ceil_u64(c * (support as f64).sqrt() / (epsilon.powi(6) * tau.powi(4))),
            mode: ConstantMode::Paper,
        })
    }

    pub fn practical(support: usize, epsilon: f64, tau: f64) -> Result<Self> {
        Self::practical_with(support, epsilon, tau, PracticalStatDiff::default())
    }

    pub fn practical_with(
        support: usize,
        epsilon: f64,
        tau: f64,
        k: PracticalStatDiff,
    ) -> Result<Self> {
        check_eps_tau(epsilon, tau)?;
        Ok(Self {
            epsilon,
            tau,
            n: ceil_u64(k.n_coef * (2.0 / tau).ln() / (epsilon * epsilon)),
            m_inner: ceil_u64(k.inner_coef * (support as f64).sqrt() / epsilon),
            mode: ConstantMode::Practical,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m_inner == 0 {
            return Err(Error::Config("n and m_inner must be at least 1".into()));
        }
        Ok(())
    }
}

/// Estimate of `½‖p − q‖₁` with its cost.
#[derive(Clone, Debug, PartialEq)]
pub struct StatDiffReport {
    pub estimate: f64,
    /// Per-sample terms `x̃_a`.
    pub terms: Vec<f64>,
    /// Ledgers for the `p` and `q` oracles.
    pub ledgers: [QueryLedger; 2],
}

impl StatDiffReport {
    pub fn total_queries(&self) -> u64 {
        self.ledgers[0].total() + self.ledgers[1].total()
    }
}

/// Estimates `½‖p − q‖₁`.
///
/// Draws `n` indices from `(p+q)/2` by a fair coin between a sample of `p`
/// and a sample of `q`, estimates both singleton masses with `m_inner`
/// queries each, and averages `|p̃ − q̃| / (p̃ + q̃)`.
pub fn est_dist<R: Rng + ?Sized>(
    op: &OracleTable,
    oq: &OracleTable,
    params: &StatDiffParams,
    rng: &mut R,
) -> Result<StatDiffReport> {
    params.validate()?;
    if op.n() != oq.n() {
        return Err(Error::SupportMismatch {
            left: op.n(),
            right: oq.n(),
        });
    }
    let mut lp = QueryLedger::new();
    let mut lq = QueryLedger::new();
    let mut terms = Vec::with_capacity(params.n.min(1 << 24) as usize);
    for _ in 0..params.n {
        let i = if rng.random_bool(0.5) {
            op.sample(rng, &mut lp)
        } else {
            oq.sample(rng, &mut lq)
        };
        let p = est_prob(op, &[i], params.m_inner, rng, &mut lp)?.estimate;
        let q = est_prob(oq, &[i], params.m_inner, rng, &mut lq)?.estimate;
        // Both estimates can be zero when the outcome lands on 0 for a small
        // but positive mass; such a term counts as no difference.
        let x = if p + q > 0.0 { (p - q).abs() / (p + q) } else { 0.0 };
        terms.push(x);
    }
    let estimate = terms.iter().sum::<f64>() / terms.len() as f64;
    Ok(StatDiffReport {
        estimate,
        terms,
        ledgers: [lp, lq],
    })
}
