use crate::error::{Error, Result};
use crate::qsim::QuantumState;

/// The required first register `lambda * sum_i a_i b_i |i>` (or with `a_i`
/// conjugated) and its normalization `lambda = 1/sqrt(sum_i |a_i b_i|^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec {
    pub first_register: QuantumState,
    pub lambda: f64,
}

pub fn target_product(
    a: &QuantumState,
    b: &QuantumState,
    conjugate_first: bool,
) -> Result<TargetSpec> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::invalid(format!(
            "register widths differ: {} vs {}",
            a.num_qubits(),
            b.num_qubits()
        )));
    }
    let products: Vec<_> = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| if conjugate_first { x.conj() * y } else { x * y })
        .collect();
    let weight: f64 = products.iter().map(|z| z.norm_sqr()).sum();
    if weight == 0.0 {
        return Err(Error::ZeroOverlap);
    }
    let lambda = 1.0 / weight.sqrt();
    let first_register = QuantumState::normalized(products)?;
    Ok(TargetSpec {
        first_register,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nogo::epsilon_states;
    use crate::rng::seeded;
    use num_complex::Complex64;

    #[test]
    fn uniform_inputs() {
        for n in 1..=5 {
            let u = QuantumState::uniform(n).unwrap();
            let t = target_product(&u, &u, false).unwrap();
            assert!(t.first_register.max_abs_diff(&u) < 1e-14);
            assert!((t.lambda - ((1 << n) as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_target_is_zero_label() {
        let (a, b) = epsilon_states(0.5, 1).unwrap();
        let t = target_product(&a, &b, false).unwrap();
        assert_eq!(t.first_register, QuantumState::basis(1, 0).unwrap());
        assert!((t.lambda - 2.0).abs() < 1e-15);
    }

    #[test]
    fn disjoint_support() {
        let a = QuantumState::basis(1, 0).unwrap();
        let b = QuantumState::basis(1, 1).unwrap();
        assert!(matches!(
            target_product(&a, &b, false),
            Err(Error::ZeroOverlap)
        ));
        assert!(matches!(
            target_product(&a, &b, true),
            Err(Error::ZeroOverlap)
        ));
    }

    #[test]
    fn conjugated_variant() {
        let mut rng = seeded(3);
        let a = QuantumState::random(2, &mut rng).unwrap();
        let b = QuantumState::random(2, &mut rng).unwrap();
        let t = target_product(&a, &b, true).unwrap();
        for i in 0..4 {
            let want: Complex64 = a.amplitudes()[i].conj() * b.amplitudes()[i] * t.lambda;
            assert!((t.first_register.amplitudes()[i] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn width_mismatch() {
        let a = QuantumState::basis(1, 0).unwrap();
        let b = QuantumState::basis(2, 0).unwrap();
        assert!(target_product(&a, &b, false).is_err());
    }
}
