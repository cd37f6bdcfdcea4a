//! Lower-bound machinery: the reduction from the collision problem to
//! orthogonality testing, and Poissonized fingerprints for the classical
//! uniformity bound.

mod collision;
mod fingerprint;
mod matching;
mod valiant;

pub use collision::{
    build_collision_oracles, collision_range, matching_parity_distance, CollisionFunction,
    CollisionKind,
};
pub use fingerprint::{
    empirical_fingerprint_tv, fingerprint_of, poisson_goodness_of_fit,
    sample_poissonized_counts, sample_poissonized_fingerprint, Fingerprint, FingerprintDistance,
    GoodnessOfFit, PoissonizedSampler,
};
pub use matching::{sequential_matching_sampler, PerfectMatching};
pub use valiant::{corollary_report, parse_decimal, valiant_bound, CorollaryReport};
