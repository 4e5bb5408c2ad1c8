//! Dense pure-state quantum simulation.
//!
//! A state on `n` qubits is a unit vector of `2^n` amplitudes. States evolve
//! by [`UnitaryMap`]s and are probed by complete [`MeasurementSet`]s. The
//! QFT is available both as a dense unitary and as a gate circuit.

mod linear;
mod measure;
mod qft;
mod state;

pub use linear::{LinearMap, UnitaryMap, UNITARY_TOL};
pub use measure::{
    measure, outcome_probabilities, sample_counts, sample_outcome, Measured, MeasurementOperator,
    MeasurementSet, COMPLETENESS_TOL, MIN_OUTCOME_PROBABILITY,
};
pub use qft::{iqft_dense, qft_circuit, qft_dense, Gate, QftCircuit};
pub use state::{apply, tensor, QuantumState, NORM_TOL};
