use crate::dist::QueryLedger;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn is_reject(self) -> bool {
        self == Decision::Reject
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
        }
    }
}

/// Which set of constants a tester runs with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ConstantMode {
    /// Worst-case constants that carry the correctness guarantees.
    Paper,
    /// Empirically calibrated constants.
    #[default]
    Practical,
}

impl ConstantMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstantMode::Paper => "paper",
            ConstantMode::Practical => "practical",
        }
    }
}

impl std::str::FromStr for ConstantMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "paper" => Ok(ConstantMode::Paper),
            "practical" => Ok(ConstantMode::Practical),
            other => Err(crate::Error::Config(format!(
                "mode must be `paper` or `practical`, got {other:?}"
            ))),
        }
    }
}

/// Internal values of one tester round.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub round: u64,
    /// The estimated statistic (`p̃_S`, `q̃_A` or a collision rate).
    pub statistic: f64,
    pub threshold: f64,
    /// True value of the estimated quantity, or NaN when not tracked.
    /// Bookkeeping only.
    pub true_value: f64,
    /// The sample list contained a repeated element.
    pub collision: bool,
    /// Number of distinct sampled elements.
    pub distinct: usize,
    pub decision: Decision,
    /// The raw sample list, kept only when requested.
    pub samples: Option<Vec<u32>>,
}

/// Outcome of a tester together with its query cost and per-round trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TestVerdict {
    pub decision: Decision,
    /// One ledger per oracle, in argument order.
    pub ledgers: Vec<QueryLedger>,
    pub rounds: Vec<RoundRecord>,
}

impl TestVerdict {
    pub fn total_queries(&self) -> u64 {
        self.ledgers.iter().map(QueryLedger::total).sum()
    }

    pub fn combined_ledger(&self) -> QueryLedger {
        let mut all = QueryLedger::new();
        for l in &self.ledgers {
            all.absorb(l);
        }
        all
    }
}
