//! Componentwise-product impossibility harness.
//!
//! The map `a (x) b -> lambda * sum_i a_i b_i |i>` (and its conjugated
//! variant) is the spectral core of convolution and correlation on quantum
//! amplitudes. This module provides:
//!
//! - the target state and the epsilon input family used against it,
//! - a residual measuring how far a linear candidate with ancilla is from
//!   producing `target (x) (anything)`,
//! - the scalar contradiction check on the normalization polynomial,
//! - a random-restart search for the best linear candidate,
//! - the reduction showing that a convolution (correlation) process composed
//!   with QFTs would produce the componentwise product.

mod analytic;
mod epsilon;
mod reduction;
mod residual;
mod search;
mod target;

pub use analytic::{
    normalization_contradiction_check, normalization_expression, AnalyticReport, EpsilonValue,
    CHECK_EPSILONS,
};
pub use epsilon::{epsilon_states, EpsilonFamily};
pub use reduction::{reduce_convolution, reduce_correlation, ClassicalOracle, ProductOracle};
pub use residual::{residual, CandidateProcess, ResidualReport};
pub use search::{
    search_best_candidate, Probe, ProbeSet, ProbeSetDefinition, ProbeSetRegistry, SearchConfig,
    SearchOutcome, SearchReport,
};
pub use target::{target_product, TargetSpec};
