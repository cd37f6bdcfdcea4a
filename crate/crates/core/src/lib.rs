//! Quantum and classical property testers for distributions given as
//! oracles `O: [S] → [N]`, with the exact and statistical tools used to
//! check them and a seeded experiment harness.
//!
//! See the guide in `book/` for a walkthrough.

pub mod amp_est;
pub mod classical;
pub mod dist;
pub mod error;
pub mod harness;
pub mod lower_bounds;
pub mod rng;
pub mod testers;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/amplitude-estimation.md")]
    mod amplitude_estimation {}
    #[doc = include_str!("../../../book/src/testers.md")]
    mod testers {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/lower-bounds.md")]
    mod lower_bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/csv.md")]
    mod csv {}
}
