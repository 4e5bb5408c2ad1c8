use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::QuantumState;

/// Inputs `a = (eps, sqrt(1 - eps^2), 0, ...)`, `b = |0>` on `n`-qubit
/// registers. Only `a_0 b_0 = eps` and `a_1 b_0` are nonzero among the
/// products, so the target is `|0>` with `lambda = 1/eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonFamily {
    epsilon: f64,
    num_qubits: usize,
}

impl EpsilonFamily {
    pub fn new(epsilon: f64, num_qubits: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if num_qubits == 0 {
            return Err(Error::invalid("need at least one qubit per register"));
        }
        Ok(Self {
            epsilon,
            num_qubits,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn states(&self) -> (QuantumState, QuantumState) {
        let dim = 1usize << self.num_qubits;
        let mut a = vec![Complex64::new(0.0, 0.0); dim];
        a[0] = Complex64::new(self.epsilon, 0.0);
        a[1] = Complex64::new((1.0 - self.epsilon * self.epsilon).sqrt(), 0.0);
        let a = QuantumState::from_amplitudes(a).expect("unit norm by construction");
        let b = QuantumState::basis(self.num_qubits, 0).expect("valid basis state");
        (a, b)
    }

    /// `1 / eps`.
    pub fn lambda(&self) -> f64 {
        1.0 / self.epsilon
    }
}

pub fn epsilon_states(epsilon: f64, num_qubits: usize) -> Result<(QuantumState, QuantumState)> {
    Ok(EpsilonFamily::new(epsilon, num_qubits)?.states())
}
