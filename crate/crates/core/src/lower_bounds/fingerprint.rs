use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::Rng;
use rand_distr::Poisson;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson as PoissonLaw};
use std::collections::{BTreeMap, HashMap};

use crate::dist::Distribution;
use crate::error::{Error, Result};

/// `c_r`, the number of elements appearing exactly `r` times, for `r ≥ 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    counts: BTreeMap<u64, u64>,
}

impl Fingerprint {
    /// Fingerprint of a vector of per-element occurrence counts.
    pub fn from_occurrences<I: IntoIterator<Item = u64>>(occurrences: I) -> Self {
        let mut counts = BTreeMap::new();
        for r in occurrences.into_iter().filter(|&r| r > 0) {
            *counts.entry(r).or_insert(0) += 1;
        }
        Self { counts }
    }

    /// `c_r` (zero when absent).
    pub fn get(&self, r: u64) -> u64 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&r, &c)| (r, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `Σ_r r·c_r`, the length of the sample list.
    pub fn sample_size(&self) -> u64 {
        self.iter().map(|(r, c)| r * c).sum()
    }
}

pub fn fingerprint_of(samples: &[u32]) -> Fingerprint {
    let mut occ: HashMap<u32, u64> = HashMap::new();
    for &s in samples {
        *occ.entry(s).or_insert(0) += 1;
    }
    Fingerprint::from_occurrences(occ.into_values())
}

/// Draws `k ~ Poisson(M)` and then `k` samples from a fixed distribution.
#[derive(Clone, Debug)]
pub struct PoissonizedSampler {
    index: WeightedIndex<u64>,
    poisson: Option<Poisson<f64>>,
    n: usize,
}

impl PoissonizedSampler {
    pub fn new(p: &Distribution, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::Precondition(format!("Poisson rate must be non-negative, got {rate}")));
        }
        let index = WeightedIndex::new(p.counts())
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        let poisson = if rate > 0.0 {
            Some(Poisson::new(rate).map_err(|e| Error::Precondition(e.to_string()))?)
        } else {
            None
        };
        Ok(Self { index, poisson, n: p.n() })
    }

    /// Per-element occurrence counts of one Poissonized sample list.
    pub fn counts<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let mut counts = vec![0u64; self.n];
        let k = self.poisson.map_or(0, |d| d.sample(rng) as u64);
        for _ in 0..k {
            counts[self.index.sample(rng)] += 1;
        }
        counts
    }

    pub fn fingerprint<R: Rng + ?Sized>(&self, rng: &mut R) -> Fingerprint {
        Fingerprint::from_occurrences(self.counts(rng))
    }
}

/// One draw from `D^M_p`.
pub fn sample_poissonized_fingerprint<R: Rng + ?Sized>(
    p: &Distribution,
    rate: f64,
    rng: &mut R,
) -> Result<Fingerprint> {
    Ok(PoissonizedSampler::new(p, rate)?.fingerprint(rng))
}

/// Per-element counts of one Poissonized sample list; independent
/// `Poisson(M·p_i)` variables.
pub fn sample_poissonized_counts<R: Rng + ?Sized>(
    p: &Distribution,
    rate: f64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    Ok(PoissonizedSampler::new(p, rate)?.counts(rng))
}

/// Pearson goodness-of-fit of observed counts against `Poisson(rate)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Bins `0, 1, …, last−1` and a tail bin `≥ last`, where `last` is the
/// smallest value whose tail has expected count below 5.
pub fn poisson_goodness_of_fit(observations: &[u64], rate: f64) -> Result<GoodnessOfFit> {
    if observations.is_empty() || rate.is_nan() || rate <= 0.0 {
        return Err(Error::Precondition("need observations and a positive rate".into()));
    }
    let law = PoissonLaw::new(rate).map_err(|e| Error::Precondition(e.to_string()))?;
    let total = observations.len() as f64;
    let mut last = 1u64;
    while total * (1.0 - cdf_below(&law, last + 1)) >= 5.0 {
        last += 1;
    }
    let mut observed = vec![0u64; last as usize + 1];
    for &x in observations {
        observed[x.min(last) as usize] += 1;
    }
    let mut chi2 = 0.0;
    for (k, &o) in observed.iter().enumerate() {
        let p = if (k as u64) < last {
            law.pmf(k as u64)
        } else {
            1.0 - cdf_below(&law, last)
        };
        let e = p * total;
        chi2 += (o as f64 - e).powi(2) / e;
    }
    let dof = last;
    let p_value = 1.0 - ChiSquared::new(dof as f64).expect("dof > 0").cdf(chi2);
    Ok(GoodnessOfFit {
        statistic: chi2,
        dof,
        p_value,
    })
}

fn cdf_below(law: &PoissonLaw, k: u64) -> f64 {
    (0..k).map(|j| law.pmf(j)).sum()
}

/// Plug-in estimate of the distance between `D^M_p` and `D^M_u` from
/// independent draws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FingerprintDistance {
    /// Total variation, `½‖·‖₁`, in `[0, 1]`.
    pub tv: f64,
    /// `‖·‖₁`, in `[0, 2]`; the quantity [`valiant_bound`](super::valiant_bound) bounds.
    pub l1: f64,
    /// Distinct fingerprints observed across both samples.
    pub support: usize,
    pub trials: u64,
    /// Fewer than 100 trials per observed fingerprint; the plug-in value is
    /// biased upwards.
    pub biased: bool,
}

/// Draws `trials` fingerprints from each of `D^M_p` and `D^M_u` and compares
/// the two empirical laws.
pub fn empirical_fingerprint_tv<R: Rng + ?Sized>(
    p: &Distribution,
    u: &Distribution,
    rate: f64,
    trials: u64,
    rng: &mut R,
) -> Result<FingerprintDistance> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let sp = PoissonizedSampler::new(p, rate)?;
    let su = PoissonizedSampler::new(u, rate)?;
    let mut freq: BTreeMap<Fingerprint, (u64, u64)> = BTreeMap::new();
    for _ in 0..trials {
        freq.entry(sp.fingerprint(rng)).or_default().0 += 1;
    }
    for _ in 0..trials {
        freq.entry(su.fingerprint(rng)).or_default().1 += 1;
    }
    let diff: u64 = freq.values().map(|&(a, b)| a.abs_diff(b)).sum();
    let support = freq.len();
    let l1 = diff as f64 / trials as f64;
    Ok(FingerprintDistance {
        tv: l1 / 2.0,
        l1,
        support,
        trials,
        biased: trials < 100 * support as u64,
    })
}
