use rand::Rng;

use crate::dist::{OracleTable, QueryLedger};

/// Wraps an oracle so that every query is answered at a uniformly random
/// input, whatever input the caller asked for.
///
/// An adaptive classical algorithm run through the adapter becomes a
/// sampling algorithm: its answer stream is i.i.d. from the oracle's
/// distribution.
#[derive(Debug)]
pub struct SamplingAdapter<'a> {
    oracle: &'a OracleTable,
    ledger: QueryLedger,
}

impl<'a> SamplingAdapter<'a> {
    pub fn new(oracle: &'a OracleTable) -> Self {
        Self {
            oracle,
            ledger: QueryLedger::new(),
        }
    }

    /// Answers a query for input `_s` with `O(s')` for a fresh uniform `s'`.
    pub fn query<R: Rng + ?Sized>(&mut self, _s: usize, rng: &mut R) -> u32 {
        self.oracle.sample(rng, &mut self.ledger)
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }
}

/// Convenience constructor.
pub fn sampling_adapter(o: &OracleTable) -> SamplingAdapter<'_> {
    SamplingAdapter::new(o)
}
