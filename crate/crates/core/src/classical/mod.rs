//! Classical baselines: the sampling adapter and sample-based testers.

mod adapter;
mod testers;

pub use adapter::{sampling_adapter, SamplingAdapter};
pub use testers::{
    classical_orthogonality_test, classical_statdiff_plugin, classical_uniformity_test,
};
