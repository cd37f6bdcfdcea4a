use num_rational::Ratio;
use std::fmt;

use crate::dist::Distribution;
use crate::error::{Error, Result};

const TERM_TOL: f64 = 1e-15;
const MAX_ORDER: u32 = 100_000;

/// Nonzero weight levels `(N·w, multiplicity)` of a distribution on `[N]`.
#[derive(Clone, Debug)]
struct Levels {
    n: f64,
    levels: Vec<(f64, f64)>,
    max_weight: f64,
}

impl Levels {
    fn of(p: &Distribution) -> Self {
        let n = p.n() as u128;
        let d = p.denom() as u128;
        let levels = p
            .levels()
            .into_iter()
            .map(|(c, mult)| ((u128::from(c) * n) as f64 / d as f64, mult as f64))
            .collect();
        Self {
            n: p.n() as f64,
            levels,
            max_weight: p.max_weight(),
        }
    }
}

fn half_factorial(k: u32) -> f64 {
    (1..=k / 2).map(f64::from).product()
}

fn series(lv: &Levels, m: f64) -> Result<f64> {
    let n = lv.n;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 2..=MAX_ORDER {
        let ki = k as i32;
        // Mᵏ N^{1−k} = N·(M/N)ᵏ, and m_k(p) N^{k−1} = Σ mult/N · (N w)ᵏ.
        let base = n * (m / n).powi(ki);
        let ratio: f64 = lv.levels.iter().map(|&(r, mult)| mult / n * r.powi(ki)).sum();
        let (excess, scaled_moment) = if ratio.is_finite() {
            (base * (ratio - 1.0), base * ratio)
        } else {
            let direct: f64 = lv.levels.iter().map(|&(r, mult)| mult * (m * r / n).powi(ki)).sum();
            (direct - base, direct)
        };
        let term = excess / (half_factorial(k) * (1.0 + scaled_moment).sqrt());
        sum += term;
        if term.abs() < TERM_TOL && term.abs() <= prev {
            return Ok(sum);
        }
        prev = term.abs();
    }
    Err(Error::Precondition(format!("series did not converge within {MAX_ORDER} terms")))
}

fn check_rate(lv: &Levels, m: f64, delta: f64) -> Result<()> {
    if !(m > 0.0 && delta > 0.0) {
        return Err(Error::Precondition("M and δ must be positive".into()));
    }
    if lv.max_weight * m > delta {
        return Err(Error::Precondition(format!(
            "‖p‖∞·M = {} exceeds δ = {delta}",
            lv.max_weight * m
        )));
    }
    Ok(())
}

/// Upper bound on `‖D^M_p − D^M_u‖₁`:
///
/// ```text
/// 40δ + 10 Σ_{k≥2} Mᵏ (m_k(p) − N^{1−k}) / (⌊k/2⌋! √(1 + Mᵏ m_k(p)))
/// ```
///
/// valid when `‖p‖∞ ≤ δ/M`. The series is cut once its terms are below
/// 1e−15 and decreasing. For the uniform distribution every term is exactly
/// zero.
pub fn valiant_bound(p: &Distribution, m: f64, delta: f64) -> Result<f64> {
    let lv = Levels::of(p);
    check_rate(&lv, m, delta)?;
    Ok(40.0 * delta + 10.0 * series(&lv, m)?)
}

/// The worked lower-bound instance: `p` uniform on half of `[N]`,
/// `M = 2^{−a}√N`, compared against the threshold 1/12.
#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryReport {
    pub n: u64,
    pub a: u32,
    pub m: f64,
    pub delta: Ratio<i128>,
    /// `40δ + 10·2^{3−2a}`, exact.
    pub chain_bound: Ratio<i128>,
    /// The full series bound evaluated numerically at this `N`.
    pub series_bound: f64,
    pub threshold: Ratio<i128>,
    pub certified: bool,
}

/// Parses a decimal such as `0.0001` or `1e-4` into an exact ratio.
pub fn parse_decimal(s: &str) -> Result<Ratio<i128>> {
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int}{frac}");
    let numer: i128 = all.parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    if scale.unsigned_abs() > 30 {
        return Err(bad());
    }
    let pow = 10i128.pow(scale.unsigned_abs());
    let r = if scale >= 0 {
        Ratio::from_integer(numer * pow)
    } else {
        Ratio::new(numer, pow)
    };
    Ok(if neg { -r } else { r })
}

fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Evaluates the corollary's chain of inequalities for `(N, a, δ)`.
///
/// Requires `N` even and large enough that `‖p‖∞ = 2/N ≤ δ/M`.
pub fn corollary_report(n: u64, a: u32, delta: Ratio<i128>) -> Result<CorollaryReport> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::Precondition(format!("N must be even and at least 2, got {n}")));
    }
    if !(1..=60).contains(&a) {
        return Err(Error::Precondition(format!("a must lie in 1..=60, got {a}")));
    }
    if delta <= Ratio::from_integer(0) {
        return Err(Error::Precondition("δ must be positive".into()));
    }
    let nf = n as f64;
    let m = (nf).sqrt() / 2f64.powi(a as i32);
    let lv = Levels {
        n: nf,
        levels: vec![(2.0, nf / 2.0)],
        max_weight: 2.0 / nf,
    };
    let delta_f = ratio_to_f64(&delta);
    check_rate(&lv, m, delta_f)?;
    let series_bound = 40.0 * delta_f + 10.0 * series(&lv, m)?;

    let e = 3 - 2 * a as i32;
    let pow = if e >= 0 {
        Ratio::from_integer(1i128 << e)
    } else {
        Ratio::new(1, 1i128 << (-e))
    };
    let chain_bound = delta * 40 + pow * 10;
    let threshold = Ratio::new(1, 12);
    Ok(CorollaryReport {
        n,
        a,
        m,
        delta,
        certified: chain_bound < threshold,
        chain_bound,
        series_bound,
        threshold,
    })
}

impl fmt::Display for CorollaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "a={}", self.a)?;
        writeln!(f, "m={}", self.m)?;
        writeln!(f, "delta={}", self.delta)?;
        writeln!(f, "chain_bound={}", self.chain_bound)?;
        writeln!(f, "chain_bound_decimal={}", ratio_to_f64(&self.chain_bound))?;
        writeln!(f, "series_bound={}", self.series_bound)?;
        writeln!(f, "threshold={}", self.threshold)?;
        writeln!(f, "certified={}", self.certified)
    }
}
