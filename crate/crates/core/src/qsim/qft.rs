//! Quantum Fourier transform as a dense unitary and as a gate circuit.
//!
//! `QFT |j> = 1/sqrt(N) sum_k exp(+2 pi i jk/N) |k>`, so the amplitudes of
//! `QFT |psi>` are exactly [`crate::spectral::dft`] of the amplitudes of
//! `|psi>`; the inverse transform matches [`crate::spectral::idft`].

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::linear::{LinearMap, UnitaryMap};
use super::state::QuantumState;
use crate::error::{Error, Result};

fn fourier_matrix(num_qubits: usize, sign: f64) -> Result<UnitaryMap> {
    if num_qubits == 0 {
        return Err(Error::invalid("QFT needs at least one qubit"));
    }
    let dim = 1usize << num_qubits;
    let scale = 1.0 / (dim as f64).sqrt();
    let step = sign * 2.0 * PI / dim as f64;
    let map = LinearMap::from_fn(dim, dim, |k, j| {
        Complex64::from_polar(scale, step * ((j * k) % dim) as f64)
    });
    Ok(UnitaryMap::new_unchecked(map))
}

/// Entry `(k, j)` is `exp(+2 pi i jk/N) / sqrt(N)`.
pub fn qft_dense(num_qubits: usize) -> Result<UnitaryMap> {
    fourier_matrix(num_qubits, 1.0)
}

/// Conjugate transpose of [`qft_dense`].
pub fn iqft_dense(num_qubits: usize) -> Result<UnitaryMap> {
    fourier_matrix(num_qubits, -1.0)
}

/// Elementary gates. Qubit `q` of an `n`-qubit register is bit `n - 1 - q`
/// of the basis label (qubit 0 is most significant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Hadamard {
        target: usize,
    },
    /// `diag(1, 1, 1, exp(i angle))` on the (control, target) pair.
    ControlledPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    Swap {
        a: usize,
        b: usize,
    },
}

impl Gate {
    fn apply(&self, num_qubits: usize, amps: &mut [Complex64]) {
        let bit = |q: usize| 1usize << (num_qubits - 1 - q);
        match *self {
            Gate::Hadamard { target } => {
                let t = bit(target);
                let h = FRAC_1_SQRT_2;
                for i in 0..amps.len() {
                    if i & t == 0 {
                        let (x, y) = (amps[i], amps[i | t]);
                        amps[i] = (x + y) * h;
                        amps[i | t] = (x - y) * h;
                    }
                }
            }
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => {
                let mask = bit(control) | bit(target);
                let phase = Complex64::from_polar(1.0, angle);
                for (i, z) in amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *z *= phase;
                    }
                }
            }
            Gate::Swap { a, b } => {
                let (ba, bb) = (bit(a), bit(b));
                for i in 0..amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        amps.swap(i, (i & !ba) | bb);
                    }
                }
            }
        }
    }
}

/// Hadamard and controlled-phase ladder followed by the qubit-reversal swaps.
#[derive(Debug, Clone, PartialEq)]
pub struct QftCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

/// Builds the `n(n+1)/2 + floor(n/2)` gate QFT circuit.
pub fn qft_circuit(num_qubits: usize) -> Result<QftCircuit> {
    if num_qubits == 0 {
        return Err(Error::invalid("QFT needs at least one qubit"));
    }
    let n = num_qubits;
    let mut gates = Vec::with_capacity(n * (n + 1) / 2 + n / 2);
    for target in 0..n {
        gates.push(Gate::Hadamard { target });
        for control in target + 1..n {
            let k = control - target + 1;
            gates.push(Gate::ControlledPhase {
                control,
                target,
                angle: 2.0 * PI / (1u64 << k) as f64,
            });
        }
    }
    for q in 0..n / 2 {
        gates.push(Gate::Swap { a: q, b: n - 1 - q });
    }
    Ok(QftCircuit { num_qubits, gates })
}

impl QftCircuit {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Number of Hadamard plus controlled-phase gates.
    pub fn rotation_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| !matches!(g, Gate::Swap { .. }))
            .count()
    }

    pub fn swap_count(&self) -> usize {
        self.gate_count() - self.rotation_count()
    }

    pub fn apply(&self, s: &QuantumState) -> Result<QuantumState> {
        if s.num_qubits() != self.num_qubits {
            return Err(Error::invalid(format!(
                "{}-qubit circuit cannot act on a {}-qubit state",
                self.num_qubits,
                s.num_qubits()
            )));
        }
        let mut amps = s.amplitudes().to_vec();
        self.apply_in_place(&mut amps);
        Ok(QuantumState::from_parts_unchecked(self.num_qubits, amps))
    }

    fn apply_in_place(&self, amps: &mut [Complex64]) {
        for g in &self.gates {
            g.apply(self.num_qubits, amps);
        }
    }

    /// Dense matrix of the whole circuit, built column by column.
    pub fn to_matrix(&self) -> LinearMap {
        let dim = 1usize << self.num_qubits;
        let mut columns = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut col = vec![Complex64::new(0.0, 0.0); dim];
            col[j] = Complex64::new(1.0, 0.0);
            self.apply_in_place(&mut col);
            columns.push(col);
        }
        LinearMap::from_fn(dim, dim, |r, c| columns[c][r])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::spectral::{dft, idft, ComplexSequence};

    #[test]
    fn single_qubit_qft() {
        let h = FRAC_1_SQRT_2;
        let q = qft_dense(1).unwrap();
        let m = q.as_linear();
        assert!((m.get(0, 0) - h).norm() < 1e-15);
        assert!((m.get(1, 0) - h).norm() < 1e-15);
        assert!((m.get(0, 1) - h).norm() < 1e-15);
        assert!((m.get(1, 1) + h).norm() < 1e-15);
    }

    #[test]
    fn qft_iqft_are_inverses() {
        for n in 1..=8 {
            let prod = qft_dense(n)
                .unwrap()
                .compose(&iqft_dense(n).unwrap())
                .unwrap();
            let dev = prod.as_linear().max_abs_diff(&LinearMap::identity(1 << n));
            assert!(dev < 1e-10, "n={n}: {dev}");
            assert_eq!(iqft_dense(n).unwrap(), qft_dense(n).unwrap().adjoint());
        }
    }

    #[test]
    fn qft_amplitudes_are_dft() {
        let mut rng = seeded(21);
        for n in 1..=6 {
            let s = QuantumState::random(n, &mut rng).unwrap();
            let seq = ComplexSequence::new(s.amplitudes().to_vec()).unwrap();
            let out = s.apply(&qft_dense(n).unwrap()).unwrap();
            let want = dft(&seq);
            assert!(crate::spectral::max_abs_diff(out.amplitudes(), want.as_slice()) < 1e-10);
            let out = s.apply(&iqft_dense(n).unwrap()).unwrap();
            let want = idft(&seq);
            assert!(crate::spectral::max_abs_diff(out.amplitudes(), want.as_slice()) < 1e-10);
        }
    }

    #[test]
    fn circuit_gate_counts() {
        let c = qft_circuit(1).unwrap();
        assert_eq!(c.gates(), &[Gate::Hadamard { target: 0 }]);
        let c = qft_circuit(3).unwrap();
        assert_eq!((c.rotation_count(), c.swap_count()), (6, 1));
        assert_eq!(qft_circuit(8).unwrap().gate_count(), 40);
        assert!(qft_circuit(0).is_err());
    }

    #[test]
    fn circuit_matches_dense() {
        for n in 1..=6 {
            let dev = qft_circuit(n)
                .unwrap()
                .to_matrix()
                .max_abs_diff(qft_dense(n).unwrap().as_linear());
            assert!(dev < 1e-9, "n={n}: {dev}");
        }
    }

    #[test]
    fn circuit_apply_checks_width() {
        let c = qft_circuit(2).unwrap();
        assert!(c.apply(&QuantumState::basis(3, 0).unwrap()).is_err());
    }
}
