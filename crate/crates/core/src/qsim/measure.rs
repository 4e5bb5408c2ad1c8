use num_complex::Complex64;
use rand::Rng;

use super::linear::LinearMap;
use super::state::QuantumState;
use crate::error::{Error, Result};

/// Tolerance on `sum_m M_m^dagger M_m = I` at construction.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Outcomes with probability below this are never sampled; the collapse
/// formula divides by `sqrt(p)`.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;

/// A single measurement operator `M_m`.
///
/// Diagonal operators are stored as their diagonal so that projectors on
/// large registers (e.g. `2n = 20` qubits) stay linear in the dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementOperator {
    Dense(LinearMap),
    Diagonal(Vec<Complex64>),
}

impl MeasurementOperator {
    /// Projector onto the computational basis labels selected by `keep`.
    pub fn basis_projector(dim: usize, keep: impl Fn(usize) -> bool) -> Self {
        MeasurementOperator::Diagonal(
            (0..dim)
                .map(|i| Complex64::new(if keep(i) { 1.0 } else { 0.0 }, 0.0))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        match self {
            MeasurementOperator::Dense(m) => m.cols(),
            MeasurementOperator::Diagonal(d) => d.len(),
        }
    }

    fn is_square(&self) -> bool {
        match self {
            MeasurementOperator::Dense(m) => m.is_square(),
            MeasurementOperator::Diagonal(_) => true,
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            MeasurementOperator::Dense(m) => m.mul_vec(v),
            MeasurementOperator::Diagonal(d) => d.iter().zip(v).map(|(a, b)| a * b).collect(),
        }
    }

    /// `||M v||^2` without materializing `M v` for diagonal operators.
    fn weight(&self, v: &[Complex64]) -> f64 {
        match self {
            MeasurementOperator::Dense(m) => m.mul_vec(v).iter().map(|z| z.norm_sqr()).sum(),
            MeasurementOperator::Diagonal(d) => {
                d.iter().zip(v).map(|(a, b)| (a * b).norm_sqr()).sum()
            }
        }
    }

    /// Dense `M^dagger M`.
    fn gram(&self) -> LinearMap {
        match self {
            MeasurementOperator::Dense(m) => m.adjoint().matmul(m).expect("square"),
            MeasurementOperator::Diagonal(d) => {
                let n = d.len();
                LinearMap::from_fn(n, n, |r, c| {
                    if r == c {
                        Complex64::new(d[r].norm_sqr(), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            }
        }
    }
}

/// A complete collection `{M_m}`; validated once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    operators: Vec<MeasurementOperator>,
}

impl MeasurementSet {
    pub fn new(operators: Vec<MeasurementOperator>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::invalid("measurement set must be nonempty"))?;
        let dim = first.dim();
        if operators.iter().any(|m| !m.is_square() || m.dim() != dim) {
            return Err(Error::invalid(
                "measurement operators must be square and of equal dimension",
            ));
        }
        let deviation = completeness_deviation(&operators, dim);
        if deviation > COMPLETENESS_TOL {
            return Err(Error::IncompleteMeasurement { deviation });
        }
        Ok(Self { operators })
    }

    pub fn from_dense(ops: Vec<LinearMap>) -> Result<Self> {
        Self::new(ops.into_iter().map(MeasurementOperator::Dense).collect())
    }

    /// One projector `|i><i|` per basis label.
    pub fn computational_basis(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::invalid("need at least one qubit"));
        }
        let dim = 1 << num_qubits;
        Self::new(
            (0..dim)
                .map(|k| MeasurementOperator::basis_projector(dim, |i| i == k))
                .collect(),
        )
    }

    /// The trivial measurement `{I}`.
    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![MeasurementOperator::basis_projector(dim, |_| true)],
        }
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[MeasurementOperator] {
        &self.operators
    }

    /// `max |(sum_m M_m^dagger M_m - I)_{rc}|`.
    pub fn completeness_deviation(&self) -> f64 {
        completeness_deviation(&self.operators, self.dim())
    }

    fn check_dim(&self, s: &QuantumState) -> Result<()> {
        if s.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "measurement of dimension {} cannot act on a {}-dimensional state",
                self.dim(),
                s.dim()
            )));
        }
        Ok(())
    }
}

fn completeness_deviation(ops: &[MeasurementOperator], dim: usize) -> f64 {
    if ops
        .iter()
        .all(|m| matches!(m, MeasurementOperator::Diagonal(_)))
    {
        return (0..dim)
            .map(|i| {
                let s: f64 = ops
                    .iter()
                    .map(|m| match m {
                        MeasurementOperator::Diagonal(d) => d[i].norm_sqr(),
                        MeasurementOperator::Dense(_) => unreachable!(),
                    })
                    .sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max);
    }
    let mut sum = LinearMap::zeros(dim, dim);
    for m in ops {
        for (acc, g) in sum.entries_mut().iter_mut().zip(m.gram().entries()) {
            *acc += g;
        }
    }
    sum.max_abs_diff(&LinearMap::identity(dim))
}

/// Born-rule probabilities `p(m) = <psi| M_m^dagger M_m |psi>`.
pub fn outcome_probabilities(s: &QuantumState, ms: &MeasurementSet) -> Result<Vec<f64>> {
    ms.check_dim(s)?;
    Ok(ms
        .operators
        .iter()
        .map(|m| m.weight(s.amplitudes()))
        .collect())
}

/// Draws an outcome index from `probs`, skipping outcomes below
/// [`MIN_OUTCOME_PROBABILITY`] and renormalizing over the rest.
pub fn sample_outcome<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    let eligible = |p: f64| p >= MIN_OUTCOME_PROBABILITY;
    let total: f64 = probs.iter().copied().filter(|&p| eligible(p)).sum();
    let last = probs
        .iter()
        .rposition(|&p| eligible(p))
        .ok_or(Error::DegenerateMeasurement {
            threshold: MIN_OUTCOME_PROBABILITY,
        })?;
    let r = rng.random::<f64>() * total;
    let mut cumulative = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !eligible(p) {
            continue;
        }
        cumulative += p;
        if r < cumulative {
            return Ok(i);
        }
    }
    Ok(last)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measured {
    pub outcome: usize,
    pub probability: f64,
    pub post_state: QuantumState,
}

/// Samples an outcome `m` with probability `p(m)` and collapses the state to
/// `M_m |psi> / sqrt(p(m))`.
pub fn measure<R: Rng + ?Sized>(
    s: &QuantumState,
    ms: &MeasurementSet,
    rng: &mut R,
) -> Result<Measured> {
    let probs = outcome_probabilities(s, ms)?;
    let outcome = sample_outcome(&probs, rng)?;
    let collapsed = ms.operators[outcome].apply(s.amplitudes());
    let norm = crate::spectral::l2_norm(&collapsed);
    let post_state = QuantumState::from_parts_unchecked(
        s.num_qubits(),
        collapsed.into_iter().map(|z| z / norm).collect(),
    );
    Ok(Measured {
        outcome,
        probability: probs[outcome],
        post_state,
    })
}

/// Outcome counts from `trials` independent measurements of fresh copies of
/// `s`. Equivalent to calling [`measure`] `trials` times with the same
/// generator, but computes the probabilities once.
pub fn sample_counts<R: Rng + ?Sized>(
    s: &QuantumState,
    ms: &MeasurementSet,
    trials: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let probs = outcome_probabilities(s, ms)?;
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..trials {
        counts[sample_outcome(&probs, rng)?] += 1;
    }
    Ok(counts)
}
