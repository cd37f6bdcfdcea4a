//! Quantum testers for statistical difference, uniformity and orthogonality.
//!
//! Each tester comes in two parameterisations: the constants used in the
//! correctness proofs (`paper`) and calibrated ones (`practical`). Every
//! constant is a public field, so either can be overridden.

mod orthogonality;
mod precision;
mod statdiff;
mod uniformity;
mod verdict;

pub use orthogonality::{
    orthogonality_test, otest, overlap_floor, OrthogonalityParams, DEFAULT_ROUNDS,
};
pub use precision::relative_difference;
pub use statdiff::{est_dist, PracticalStatDiff, StatDiffParams, StatDiffReport};
pub use uniformity::{
    big_elements, cube_root_sample_count, sample_mass, uniformity_test, utest, w_big, without_big,
    PracticalUniformity, UniformityParams, MAX_ROUNDS,
};
pub use verdict::{ConstantMode, Decision, RoundRecord, TestVerdict};
