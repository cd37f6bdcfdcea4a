use rand::Rng;

use crate::dist::{count_colliding_pairs, OracleTable, QueryLedger};
use crate::error::{Error, Result};
use crate::testers::{Decision, RoundRecord, StatDiffReport, TestVerdict};

/// Collision-count uniformity tester.
///
/// The fraction of colliding sample pairs is an unbiased estimate of
/// `⟨p|p⟩`, which is `1/N` for the uniform distribution and at least
/// `(1+ε²)/N` for ε-nonuniform ones. Rejects above the midpoint
/// `(1 + ε²/2)/N`.
pub fn classical_uniformity_test<R: Rng + ?Sized>(
    o: &OracleTable,
    m: u64,
    epsilon: f64,
    rng: &mut R,
) -> Result<TestVerdict> {
    if m < 2 {
        return Err(Error::Config("the collision tester needs at least 2 samples".into()));
    }
    let mut ledger = QueryLedger::new();
    let samples = o.sample_many(m as usize, rng, &mut ledger);
    let pairs = count_colliding_pairs(&samples);
    let statistic = pairs as f64 / (m as f64 * (m as f64 - 1.0) / 2.0);
    let threshold = (1.0 + epsilon * epsilon / 2.0) / o.n() as f64;
    let decision = if statistic > threshold {
        Decision::Reject
    } else {
        Decision::Accept
    };
    let mut distinct = samples.clone();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(TestVerdict {
        decision,
        ledgers: vec![ledger],
        rounds: vec![RoundRecord {
            round: 0,
            statistic,
            threshold,
            true_value: f64::NAN,
            collision: pairs > 0,
            distinct: distinct.len(),
            decision,
            samples: None,
        }],
    })
}

fn histogram(o: &OracleTable, m: u64, rng: &mut (impl Rng + ?Sized), ledger: &mut QueryLedger) -> Vec<u64> {
    let mut h = vec![0u64; o.n()];
    for _ in 0..m {
        h[o.sample(rng, ledger) as usize] += 1;
    }
    h
}

/// Plug-in estimate `½‖p̂ − q̂‖₁` from `m` samples of each distribution.
pub fn classical_statdiff_plugin<R: Rng + ?Sized>(
    op: &OracleTable,
    oq: &OracleTable,
    m: u64,
    rng: &mut R,
) -> Result<StatDiffReport> {
    if m == 0 {
        return Err(Error::Config("the plug-in estimator needs at least 1 sample".into()));
    }
    if op.n() != oq.n() {
        return Err(Error::SupportMismatch {
            left: op.n(),
            right: oq.n(),
        });
    }
    let mut lp = QueryLedger::new();
    let mut lq = QueryLedger::new();
    let hp = histogram(op, m, rng, &mut lp);
    let hq = histogram(oq, m, rng, &mut lq);
    let diff: u64 = hp.iter().zip(&hq).map(|(&a, &b)| a.abs_diff(b)).sum();
    Ok(StatDiffReport {
        estimate: diff as f64 / (2.0 * m as f64),
        terms: Vec::new(),
        ledgers: [lp, lq],
    })
}

/// Rejects iff `m` samples of `p` and `m` samples of `q` share an element.
pub fn classical_orthogonality_test<R: Rng + ?Sized>(
    op: &OracleTable,
    oq: &OracleTable,
    m: u64,
    rng: &mut R,
) -> Result<TestVerdict> {
    if m == 0 {
        return Err(Error::Config("the cross-collision tester needs at least 1 sample".into()));
    }
    if op.n() != oq.n() {
        return Err(Error::SupportMismatch {
            left: op.n(),
            right: oq.n(),
        });
    }
    let mut lp = QueryLedger::new();
    let mut lq = QueryLedger::new();
    let mut a = op.sample_many(m as usize, rng, &mut lp);
    let mut b = oq.sample_many(m as usize, rng, &mut lq);
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    let shared = intersection_size(&a, &b);
    let decision = if shared > 0 {
        Decision::Reject
    } else {
        Decision::Accept
    };
    Ok(TestVerdict {
        decision,
        ledgers: vec![lp, lq],
        rounds: vec![RoundRecord {
            round: 0,
            statistic: shared as f64,
            threshold: 1.0,
            true_value: f64::NAN,
            collision: shared > 0,
            distinct: a.len(),
            decision,
            samples: None,
        }],
    })
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
