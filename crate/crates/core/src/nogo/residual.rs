use num_complex::Complex64;
use serde::Serialize;

use super::target::target_product;
use crate::error::{Error, Result};
use crate::qsim::{LinearMap, QuantumState};
use crate::spectral::l2_norm;

/// A linear map acting on `register (x) register (x) ancilla` together with
/// the fixed ancilla state it consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateProcess {
    map: LinearMap,
    ancilla: Vec<Complex64>,
    register_dim: usize,
}

impl CandidateProcess {
    /// `map` must be `N*N*M` square with `N = register_dim` and
    /// `M = ancilla.len()`; the ancilla must have unit norm.
    pub fn new(map: LinearMap, ancilla: Vec<Complex64>, register_dim: usize) -> Result<Self> {
        if register_dim < 2 || !register_dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "register dimension must be 2^n with n >= 1, got {register_dim}"
            )));
        }
        if ancilla.is_empty() {
            return Err(Error::invalid("ancilla dimension must be at least 1"));
        }
        let dim = register_dim * register_dim * ancilla.len();
        if map.rows() != dim || map.cols() != dim {
            return Err(Error::invalid(format!(
                "map must be {dim}x{dim}, got {}x{}",
                map.rows(),
                map.cols()
            )));
        }
        let norm = l2_norm(&ancilla);
        if (norm - 1.0).abs() > crate::qsim::NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            map,
            ancilla,
            register_dim,
        })
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn ancilla(&self) -> &[Complex64] {
        &self.ancilla
    }

    pub fn register_dim(&self) -> usize {
        self.register_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla.len()
    }

    /// `phi = map (a (x) b (x) ancilla)`, not renormalized.
    pub fn output(&self, a: &QuantumState, b: &QuantumState) -> Result<Vec<Complex64>> {
        if a.dim() != self.register_dim || b.dim() != self.register_dim {
            return Err(Error::invalid(format!(
                "candidate expects {}-dimensional registers",
                self.register_dim
            )));
        }
        let input: Vec<Complex64> = a
            .tensor(b)
            .amplitudes()
            .iter()
            .flat_map(|x| self.ancilla.iter().map(move |c| x * c))
            .collect();
        Ok(self.map.mul_vec(&input))
    }
}

/// Distance of an output `phi` from the form `target (x) (unit vector)`.
///
/// `factor_infidelity = 1 - <t|rho_1|t> / tr(rho_1)` where `rho_1` is the
/// reduced density matrix of the first register. Only the first register is
/// constrained; any second factor is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub norm_deviation: f64,
    pub factor_infidelity: f64,
    pub total: f64,
}

impl ResidualReport {
    /// `phi` is indexed with the first register in the high-order position.
    pub fn from_output(phi: &[Complex64], target: &QuantumState) -> Result<Self> {
        let n = target.dim();
        if phi.is_empty() || !phi.len().is_multiple_of(n) {
            return Err(Error::invalid(format!(
                "output of length {} does not factor through a {n}-dimensional register",
                phi.len()
            )));
        }
        let rest = phi.len() / n;
        let norm_sqr: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
        // <t|rho_1|t> = sum_r |sum_i conj(t_i) phi[i, r]|^2
        let overlap: f64 = (0..rest)
            .map(|r| {
                target
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .map(|(i, t)| t.conj() * phi[i * rest + r])
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum();
        Ok(Self::from_moments(norm_sqr, overlap))
    }

    /// From `||phi||^2` and `<t|rho_1|t>` (unnormalized).
    pub(crate) fn from_moments(norm_sqr: f64, overlap: f64) -> Self {
        let norm_deviation = (norm_sqr.sqrt() - 1.0).abs();
        let factor_infidelity = if norm_sqr > 0.0 {
            (1.0 - overlap / norm_sqr).clamp(0.0, 1.0)
        } else {
            1.0
        };
        Self {
            norm_deviation,
            factor_infidelity,
            total: norm_deviation + factor_infidelity,
        }
    }
}

/// Applies the candidate to `a (x) b (x) ancilla` and scores the output
/// against the componentwise-product target.
pub fn residual(
    c: &CandidateProcess,
    a: &QuantumState,
    b: &QuantumState,
    conjugate_first: bool,
) -> Result<ResidualReport> {
    let target = target_product(a, b, conjugate_first)?;
    let phi = c.output(a, b)?;
    ResidualReport::from_output(&phi, &target.first_register)
}
