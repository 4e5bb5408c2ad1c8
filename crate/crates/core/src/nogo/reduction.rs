//! `QFT . P . (IQFT (x) IQFT)`: a process `P` computing the normalized
//! convolution (correlation) of two registers, conjugated by Fourier
//! transforms, yields the normalized componentwise product (conjugated
//! product) of the original amplitudes.

use crate::error::{Error, Result};
use crate::qsim::{iqft_dense, qft_dense, QuantumState};
use crate::spectral::{convolve_direct, correlate_direct, ComplexSequence};

/// Stand-in for a hypothetical process `P` that maps the joint state
/// `sum alpha_i beta_j |ij>` to the normalized convolution or correlation.
///
/// Implementations receive the two factors out of band as well as the
/// joint state.
pub trait ProductOracle {
    fn convolve(
        &self,
        joint: &QuantumState,
        alpha: &QuantumState,
        beta: &QuantumState,
    ) -> Result<QuantumState>;

    fn correlate(
        &self,
        joint: &QuantumState,
        alpha: &QuantumState,
        beta: &QuantumState,
    ) -> Result<QuantumState>;
}

/// Computes the result classically from the out-of-band factors. It only
/// exists because it is told the coefficients; no linear map on `joint`
/// alone can do the same.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicalOracle;

impl ClassicalOracle {
    const JOINT_TOL: f64 = 1e-9;
    /// Outputs below this norm are round-off of an exactly vanishing result.
    const ZERO_OUTPUT_TOL: f64 = 1e-12;

    fn encode(s: ComplexSequence) -> Result<QuantumState> {
        if s.norm() < Self::ZERO_OUTPUT_TOL {
            return Err(Error::ZeroNorm);
        }
        QuantumState::from_sequence(&s)
    }

    fn factors(
        joint: &QuantumState,
        alpha: &QuantumState,
        beta: &QuantumState,
    ) -> Result<(ComplexSequence, ComplexSequence)> {
        if alpha.dim() != beta.dim() {
            return Err(Error::invalid("registers must have equal width"));
        }
        if joint.dim() != alpha.dim() * beta.dim()
            || joint.max_abs_diff(&alpha.tensor(beta)) > Self::JOINT_TOL
        {
            return Err(Error::invalid("joint state is not alpha (x) beta"));
        }
        Ok((
            ComplexSequence::new(alpha.amplitudes().to_vec())?,
            ComplexSequence::new(beta.amplitudes().to_vec())?,
        ))
    }
}

impl ProductOracle for ClassicalOracle {
    fn convolve(
        &self,
        joint: &QuantumState,
        alpha: &QuantumState,
        beta: &QuantumState,
    ) -> Result<QuantumState> {
        let (a, b) = Self::factors(joint, alpha, beta)?;
        Self::encode(convolve_direct(&a, &b)?)
    }

    fn correlate(
        &self,
        joint: &QuantumState,
        alpha: &QuantumState,
        beta: &QuantumState,
    ) -> Result<QuantumState> {
        let (a, b) = Self::factors(joint, alpha, beta)?;
        Self::encode(correlate_direct(&a, &b)?)
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Convolution,
    Correlation,
}

fn reduce<O: ProductOracle + ?Sized>(
    oracle: &O,
    a: &QuantumState,
    b: &QuantumState,
    kind: Kind,
) -> Result<QuantumState> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::invalid("registers must have equal width"));
    }
    let n = a.num_qubits();
    let qft = qft_dense(n)?;
    let iqft = iqft_dense(n)?;

    let joint = a.tensor(b).apply(&iqft.kron(&iqft))?;
    let alpha = a.apply(&iqft)?;
    let beta = b.apply(&iqft)?;
    let gamma = match kind {
        Kind::Convolution => oracle.convolve(&joint, &alpha, &beta)?,
        Kind::Correlation => oracle.correlate(&joint, &alpha, &beta)?,
    };
    gamma.apply(&qft)
}

/// `QFT . P_conv . (IQFT (x) IQFT)` applied to `a (x) b`; equals
/// `lambda sum_i a_i b_i |i>`.
pub fn reduce_convolution<O: ProductOracle + ?Sized>(
    oracle: &O,
    a: &QuantumState,
    b: &QuantumState,
) -> Result<QuantumState> {
    reduce(oracle, a, b, Kind::Convolution)
}

/// As [`reduce_convolution`] with a correlation process; equals
/// `lambda sum_i conj(a_i) b_i |i>`.
pub fn reduce_correlation<O: ProductOracle + ?Sized>(
    oracle: &O,
    a: &QuantumState,
    b: &QuantumState,
) -> Result<QuantumState> {
    reduce(oracle, a, b, Kind::Correlation)
}
