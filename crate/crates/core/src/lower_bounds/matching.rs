use rand::Rng;

use crate::error::{Error, Result};

/// A perfect matching on `[N]` with its parity statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct PerfectMatching {
    /// Pairs in the order they were formed, first element the chosen vertex.
    pub pairs: Vec<(usize, usize)>,
    /// Number of pairs joining an even and an odd vertex.
    pub cross_parity: usize,
    /// For each step, the probability that the pair formed was cross-parity,
    /// given the state before the step.
    pub step_cross_probability: Vec<f64>,
}

/// Samples a uniform perfect matching on `[N]` one pair at a time.
///
/// Each step takes a random unpaired vertex from the parity class that is
/// not larger (odd on ties) and pairs it with a uniformly random other
/// unpaired vertex. If that class is empty the other class is used.
pub fn sequential_matching_sampler<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PerfectMatching> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Precondition(format!("matching needs a positive even N, got {n}")));
    }
    let mut even: Vec<usize> = (0..n).step_by(2).collect();
    let mut odd: Vec<usize> = (1..n).step_by(2).collect();
    let mut pairs = Vec::with_capacity(n / 2);
    let mut probs = Vec::with_capacity(n / 2);
    let mut cross = 0;
    while !even.is_empty() || !odd.is_empty() {
        let from_odd = if even.len() >= odd.len() { !odd.is_empty() } else { even.is_empty() };
        let (own, other) = if from_odd { (&mut odd, &mut even) } else { (&mut even, &mut odd) };
        let u = own.swap_remove(rng.random_range(0..own.len()));
        let rest = own.len() + other.len();
        probs.push(other.len() as f64 / rest as f64);
        let k = rng.random_range(0..rest);
        let v = if k < other.len() {
            cross += 1;
            other.swap_remove(k)
        } else {
            own.swap_remove(k - other.len())
        };
        pairs.push((u, v));
    }
    Ok(PerfectMatching {
        pairs,
        cross_parity: cross,
        step_cross_probability: probs,
    })
}

impl PerfectMatching {
    /// Canonical form: each pair sorted, pairs sorted.
    pub fn canonical(&self) -> Vec<(usize, usize)> {
        let mut c: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        c.sort_unstable();
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn two_vertices() {
        let m = sequential_matching_sampler(2, &mut rng::from_seed(0)).unwrap();
        assert_eq!(m.canonical(), vec![(0, 1)]);
        assert_eq!(m.cross_parity, 1);
        assert!(sequential_matching_sampler(3, &mut rng::from_seed(0)).is_err());
    }

    #[test]
    fn is_a_perfect_matching() {
        let mut r = rng::from_seed(1);
        for n in [4usize, 10, 64, 256] {
            let m = sequential_matching_sampler(n, &mut r).unwrap();
            let mut seen = vec![false; n];
            for &(a, b) in &m.pairs {
                assert!(!seen[a] && !seen[b] && a != b);
                seen[a] = true;
                seen[b] = true;
            }
            assert!(seen.iter().all(|&s| s));
            let cross = m.pairs.iter().filter(|(a, b)| a % 2 != b % 2).count();
            assert_eq!(cross, m.cross_parity);
        }
    }
}
