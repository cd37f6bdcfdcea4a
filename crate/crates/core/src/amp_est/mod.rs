//! Amplitude estimation (quantum counting) in the oracle model.
//!
//! `est_prob` never builds a state vector. It samples the measurement outcome
//! of phase estimation on the Grover rotation from its closed-form law:
//! with `θ = arcsin √a`, the initial state splits evenly between the two
//! eigenvectors of the rotation with eigenphases `±θ/π`, and each contributes
//! the Fejér kernel
//!
//! ```text
//! K(Δ) = sin²(mπΔ) / (m² sin²(πΔ)),   Δ = y/m ∓ θ/π,
//! ```
//!
//! so `Pr[y] = ½K(y/m − θ/π) + ½K(y/m + θ/π)` and the estimate is
//! `sin²(πy/m)`. The dense simulator in [`reference`] builds the textbook
//! network explicitly and exists to check that law.

mod calibration;
mod estimate;
mod outcome;
pub mod reference;

pub use calibration::{
    calibrate_constant, CalibrationCell, CalibrationRecord, CalibrationSweep, DEFAULT_GRID,
};
pub use estimate::{est_prob, queries_for, EstProbPlan, ProbEstimate, CALIBRATED_C};
pub use outcome::{ae_outcome_pmf, estimate_for_outcome, exact_coverage, OutcomeLaw};
pub use reference::{unitary_reference_pmf, ReferenceCaps};
