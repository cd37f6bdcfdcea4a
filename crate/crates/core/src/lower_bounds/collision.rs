use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use std::str::FromStr;

use crate::dist::io::{format_table, parse_body};
use crate::dist::OracleTable;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollisionKind {
    OneToOne,
    TwoToOne,
}

impl CollisionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CollisionKind::OneToOne => "one-to-one",
            CollisionKind::TwoToOne => "two-to-one",
        }
    }
}

impl FromStr for CollisionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-to-one" => Ok(CollisionKind::OneToOne),
            "two-to-one" => Ok(CollisionKind::TwoToOne),
            other => Err(Error::Parse(format!("unknown collision kind {other:?}"))),
        }
    }
}

/// A function `H : [N] → [3N/2]` that is promised to be one-to-one or
/// two-to-one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionFunction {
    table: Vec<u32>,
    kind: CollisionKind,
}

/// Range size `3N/2` for domain size `N`.
pub fn collision_range(n: usize) -> usize {
    3 * n / 2
}

impl CollisionFunction {
    /// Validates the promise.
    pub fn new(table: Vec<u32>, kind: CollisionKind) -> Result<Self> {
        let n = table.len();
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidOracle(format!(
                "collision domain size must be even and positive, got {n}"
            )));
        }
        let range = collision_range(n);
        let mut hits = vec![0u8; range];
        for (x, &v) in table.iter().enumerate() {
            let slot = hits.get_mut(v as usize).ok_or_else(|| {
                Error::InvalidOracle(format!("H({x}) = {v} lies outside [0, {range})"))
            })?;
            *slot = slot.saturating_add(1);
        }
        let ok = match kind {
            CollisionKind::OneToOne => hits.iter().all(|&h| h <= 1),
            CollisionKind::TwoToOne => hits.iter().all(|&h| h == 0 || h == 2),
        };
        if !ok {
            return Err(Error::InvalidOracle(format!("table is not {}", kind.as_str())));
        }
        Ok(Self { table, kind })
    }

    /// A uniformly random injective `H`.
    pub fn random_one_to_one<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut values: Vec<u32> = (0..collision_range(n) as u32).collect();
        values.shuffle(rng);
        values.truncate(n);
        Self::new(values, CollisionKind::OneToOne)
    }

    /// A random two-to-one `H`: `N/2` distinct values, each placed on a pair
    /// of a uniformly random perfect matching of the domain.
    pub fn random_two_to_one<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidOracle(format!(
                "collision domain size must be even and positive, got {n}"
            )));
        }
        let mut values: Vec<u32> = (0..collision_range(n) as u32).collect();
        values.shuffle(rng);
        let mut positions: Vec<usize> = (0..n).collect();
        positions.shuffle(rng);
        let mut table = vec![0u32; n];
        for (pair, &v) in positions.chunks_exact(2).zip(&values) {
            table[pair[0]] = v;
            table[pair[1]] = v;
        }
        Self::new(table, CollisionKind::TwoToOne)
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn kind(&self) -> CollisionKind {
        self.kind
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Serialises as a `kind` line followed by the oracle format with
    /// `N = 3n/2` and `S = n`.
    pub fn to_text(&self) -> String {
        format!(
            "kind {}\n{}",
            self.kind.as_str(),
            format_table(collision_range(self.n()), &self.table)
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        if tokens.next() != Some("kind") {
            return Err(Error::Parse("collision file must start with `kind`".into()));
        }
        let kind: CollisionKind = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing collision kind".into()))?
            .parse()?;
        let (range, table) = parse_body(&mut tokens)?;
        if range != collision_range(table.len()) {
            return Err(Error::Parse(format!(
                "range {range} does not equal 3/2 of the domain size {}",
                table.len()
            )));
        }
        Self::new(table, kind)
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::Precondition(format!(
            "permutation has length {}, expected {n}",
            sigma.len()
        )));
    }
    for &x in sigma {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::Precondition("σ is not a permutation".into()));
        }
    }
    Ok(())
}

/// The oracles `O_p(s) = H(σ(2s))` and `O_q(s) = H(σ(2s+1))` on `[N/2]`,
/// both with range `[3N/2]`.
pub fn build_collision_oracles(
    h: &CollisionFunction,
    sigma: &[usize],
) -> Result<(OracleTable, OracleTable)> {
    let n = h.n();
    check_permutation(sigma, n)?;
    let range = collision_range(n);
    let even = (0..n / 2).map(|s| h.table[sigma[2 * s]]).collect();
    let odd = (0..n / 2).map(|s| h.table[sigma[2 * s + 1]]).collect();
    Ok((OracleTable::new(range, even)?, OracleTable::new(range, odd)?))
}

/// `‖p − q‖₁` for the pair built by [`build_collision_oracles`], computed
/// from the matching `σ⁻¹ ∘ M` as `2 − (4/N)·#{cross-parity pairs}`.
pub fn matching_parity_distance(h: &CollisionFunction, sigma: &[usize]) -> Result<Ratio<u128>> {
    if h.kind != CollisionKind::TwoToOne {
        return Err(Error::Precondition("the matching formula needs a two-to-one H".into()));
    }
    let n = h.n();
    check_permutation(sigma, n)?;
    let mut inverse = vec![0usize; n];
    for (u, &x) in sigma.iter().enumerate() {
        inverse[x] = u;
    }
    // first preimage seen for each value, as a position in σ's domain
    let mut partner: Vec<Option<usize>> = vec![None; collision_range(n)];
    let mut cross = 0u128;
    for (x, &w) in h.table.iter().enumerate() {
        let u = inverse[x];
        match partner[w as usize].take() {
            None => partner[w as usize] = Some(u),
            Some(v) => cross += u128::from((u % 2) != (v % 2)),
        }
    }
    let n = n as u128;
    Ok(Ratio::new(2 * n - 4 * cross, n))
}
