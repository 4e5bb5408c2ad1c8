use num_complex::Complex64;
use rand::Rng;

use super::linear::UnitaryMap;
use crate::error::{Error, Result};
use crate::rng::complex_gaussian_vec;
use crate::spectral::{l2_norm, ComplexSequence};

/// Tolerance on `|norm - 1|` for every constructed state.
pub const NORM_TOL: f64 = 1e-10;

/// Pure state of `num_qubits` qubits: `2^n` amplitudes of unit total norm.
///
/// Basis label `i` is read as a binary string with qubit 0 as the most
/// significant bit, so in a tensor product the first factor occupies the
/// high-order bits: `|i> (x) |j> = |i * 2^m + j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn qubits_for(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::invalid(format!(
            "state length must be 2^n with n >= 1, got {len}"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

impl QuantumState {
    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for(amplitudes.len())?;
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for(amplitudes.len())?;
        let norm = l2_norm(&amplitudes);
        if !norm.is_finite() {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            num_qubits,
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Encodes a nonzero power-of-two-length sequence as `s / ||s||`.
    pub fn from_sequence(s: &ComplexSequence) -> Result<Self> {
        Self::normalized(s.as_slice().to_vec())
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || index >= 1 << num_qubits {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Equal superposition, every amplitude `1/sqrt(N)`.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::invalid("need at least one qubit"));
        }
        let dim = 1usize << num_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![a; dim],
        })
    }

    /// Normalized complex Gaussian vector (uniform on the unit sphere).
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::invalid("need at least one qubit"));
        }
        Self::normalized(complex_gaussian_vec(rng, 1 << num_qubits))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn max_abs_diff(&self, other: &QuantumState) -> f64 {
        crate::spectral::max_abs_diff(&self.amplitudes, &other.amplitudes)
    }

    /// `self (x) other`, amplitude `a_i b_j` at label `i * dim(other) + j`.
    pub fn tensor(&self, other: &QuantumState) -> QuantumState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        QuantumState {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        }
    }

    /// `U |self>`.
    pub fn apply(&self, u: &UnitaryMap) -> Result<QuantumState> {
        if u.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "unitary of dimension {} cannot act on a {}-dimensional state",
                u.dim(),
                self.dim()
            )));
        }
        Ok(QuantumState {
            num_qubits: self.num_qubits,
            amplitudes: u.as_linear().mul_vec(&self.amplitudes),
        })
    }
}

/// `s1 (x) s2`.
pub fn tensor(s1: &QuantumState, s2: &QuantumState) -> QuantumState {
    s1.tensor(s2)
}

/// `U |s>`.
pub fn apply(u: &UnitaryMap, s: &QuantumState) -> Result<QuantumState> {
    s.apply(u)
}
