use rand::Rng;
use std::f64::consts::PI;

/// Offsets closer than this (as a fraction of the outcome circle) to a grid
/// point are treated as exact alignment, where the kernel is a point mass.
const ALIGNMENT_TOL: f64 = 1e-12;

/// One eigenphase's Fejér kernel on the outcome circle `Z_m`.
#[derive(Clone, Copy, Debug)]
struct Kernel {
    m: u64,
    /// Grid point nearest the peak.
    nearest: u64,
    /// Signed distance from `nearest` to the peak, in outcome units.
    frac: f64,
    aligned: bool,
    /// `sin²(π·frac)`, the numerator shared by every outcome.
    numer: f64,
}

impl Kernel {
    fn new(center: f64, m: u64) -> Self {
        let mf = m as f64;
        let c = center.rem_euclid(mf);
        let r = c.round();
        let frac = c - r;
        let aligned = frac.abs() < ALIGNMENT_TOL * mf;
        let nearest = (r as u64) % m;
        Self {
            m,
            nearest,
            frac,
            aligned,
            numer: (PI * frac).sin().powi(2),
        }
    }

    /// Probability of landing `k` grid steps from `nearest`.
    fn at_offset(&self, k: i64) -> f64 {
        if self.aligned {
            return if k.rem_euclid(self.m as i64) == 0 { 1.0 } else { 0.0 };
        }
        let mf = self.m as f64;
        let s = (PI * (k as f64 - self.frac) / mf).sin();
        self.numer / (mf * mf * s * s)
    }

    fn prob(&self, y: u64) -> f64 {
        let m = self.m as i64;
        let mut k = (y as i64 - self.nearest as i64).rem_euclid(m);
        if k > m / 2 {
            k -= m;
        }
        self.at_offset(k)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.aligned {
            return self.nearest;
        }
        let u: f64 = rng.random();
        let m = self.m as i64;
        let mut acc = 0.0;
        let mut k = 0i64;
        // Walk outwards from the peak: 0, +1, -1, +2, -2, ... covering each
        // residue mod m exactly once.
        for i in 0..m {
            k = if i == 0 {
                0
            } else if i % 2 == 1 {
                (i + 1) / 2
            } else {
                -(i / 2)
            };
            acc += self.at_offset(k);
            if u < acc {
                break;
            }
        }
        (self.nearest as i64 + k).rem_euclid(m) as u64
    }
}

/// Measurement law of amplitude estimation with `m` outcomes for amplitude
/// `a = sin²θ`.
#[derive(Clone, Copy, Debug)]
pub struct OutcomeLaw {
    m: u64,
    kernels: [Kernel; 2],
}

impl OutcomeLaw {
    /// # Panics
    ///
    /// Panics unless `0 ≤ a ≤ 1` and `m ≥ 1`.
    pub fn new(a: f64, m: u64) -> Self {
        assert!((0.0..=1.0).contains(&a), "amplitude must lie in [0, 1], got {a}");
        assert!(m >= 1, "outcome count must be positive");
        let theta = a.sqrt().asin();
        let center = m as f64 * theta / PI;
        Self {
            m,
            kernels: [Kernel::new(center, m), Kernel::new(-center, m)],
        }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn prob(&self, y: u64) -> f64 {
        0.5 * (self.kernels[0].prob(y) + self.kernels[1].prob(y))
    }

    pub fn pmf(&self) -> Vec<f64> {
        (0..self.m).map(|y| self.prob(y)).collect()
    }

    /// Draws an outcome `y ∈ {0, …, m−1}`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let which = usize::from(rng.random_bool(0.5));
        self.kernels[which].sample(rng)
    }
}

/// Probability vector of the outcome `y` over `{0, …, m−1}`.
pub fn ae_outcome_pmf(a: f64, m: u64) -> Vec<f64> {
    OutcomeLaw::new(a, m).pmf()
}

/// The amplitude estimate reported for outcome `y`: `sin²(πy/m)`.
pub fn estimate_for_outcome(y: u64, m: u64) -> f64 {
    (PI * y as f64 / m as f64).sin().powi(2)
}

/// `Pr[|ã − a| ≤ δ]` computed exactly from the outcome law.
pub fn exact_coverage(a: f64, m: u64, delta: f64) -> f64 {
    let law = OutcomeLaw::new(a, m);
    (0..m)
        .filter(|&y| (estimate_for_outcome(y, m) - a).abs() <= delta)
        .map(|y| law.prob(y))
        .sum()
}
