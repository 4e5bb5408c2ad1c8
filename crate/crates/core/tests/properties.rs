use num_complex::Complex64;
use proptest::prelude::*;

use qconv_core::nogo::{
    epsilon_states, normalization_contradiction_check, target_product, ResidualReport,
};
use qconv_core::qsim::{measure, outcome_probabilities, MeasurementSet, QuantumState, UnitaryMap};
use qconv_core::rng::seeded;
use qconv_core::spectral::{
    convolve_direct, correlate_direct, dft, fft, idft, ifft, pad_zeros, padded_convolution_witness,
    padded_correlation_witness, ComplexSequence,
};

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn sequence(len: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = ComplexSequence> {
    prop::collection::vec(complex(), len).prop_map(|v| ComplexSequence::new(v).unwrap())
}

fn pow2_sequence_pair() -> impl Strategy<Value = (ComplexSequence, ComplexSequence)> {
    (0u32..7).prop_flat_map(|k| {
        let n = 1usize << k;
        (sequence(n), sequence(n))
    })
}

/// Sequences with some exact zeros and at least one nonzero entry.
fn sparse_nonzero(len: usize) -> impl Strategy<Value = ComplexSequence> {
    (
        prop::collection::vec((any::<bool>(), complex()), len),
        0..len,
    )
        .prop_map(|(v, forced)| {
            let mut vals: Vec<Complex64> = v
                .into_iter()
                .map(|(keep, z)| if keep { z } else { Complex64::new(0.0, 0.0) })
                .collect();
            if vals.iter().all(|z| z.norm() == 0.0) {
                vals[forced] = Complex64::new(1.0, -1.0);
            }
            ComplexSequence::new(vals).unwrap()
        })
}

fn scale(s: &ComplexSequence) -> f64 {
    s.norm().max(1.0)
}

proptest! {
    #[test]
    fn parseval(s in sequence(1..64)) {
        prop_assert!((dft(&s).norm() - s.norm()).abs() < 1e-9 * scale(&s));
        prop_assert!((idft(&s).norm() - s.norm()).abs() < 1e-9 * scale(&s));
    }

    #[test]
    fn round_trips(s in sequence(1..48)) {
        prop_assert!(idft(&dft(&s)).max_abs_diff(&s) < 1e-9 * scale(&s));
        if s.len().is_power_of_two() {
            prop_assert!(ifft(&fft(&s).unwrap()).unwrap().max_abs_diff(&s) < 1e-9 * scale(&s));
            prop_assert!(fft(&s).unwrap().max_abs_diff(&dft(&s)) < 1e-9 * scale(&s));
        }
    }

    #[test]
    fn convolution_theorem((a, b) in pow2_sequence_pair()) {
        let n = a.len();
        let root_n = (n as f64).sqrt();
        let (fa, fb) = (dft(&a), dft(&b));
        let lhs = dft(&convolve_direct(&a, &b).unwrap());
        let tol = 1e-8 * scale(&a) * scale(&b);
        for k in 0..n {
            prop_assert!((lhs[k] - fa[k] * fb[k] * root_n).norm() < tol);
        }
        let lhs = dft(&correlate_direct(&a, &b).unwrap());
        for k in 0..n {
            prop_assert!((lhs[k] - fa[k].conj() * fb[k] * root_n).norm() < tol);
        }
    }

    #[test]
    fn padding_witness_nonzero(
        (a, b) in (1usize..12).prop_flat_map(|n| (sparse_nonzero(n), sparse_nonzero(n)))
    ) {
        let (pa, pb) = (pad_zeros(&a), pad_zeros(&b));
        let conv = convolve_direct(&pa, &pb).unwrap();
        prop_assert!(conv[padded_convolution_witness(&a, &b).unwrap()].norm() > 0.0);
        let corr = correlate_direct(&pa, &pb).unwrap();
        prop_assert!(corr[padded_correlation_witness(&a, &b).unwrap()].norm() > 0.0);
    }

    #[test]
    fn tensor_norm_and_associativity(seed in any::<u64>(), n1 in 1usize..3, n2 in 1usize..3, n3 in 1usize..3) {
        let mut rng = seeded(seed);
        let a = QuantumState::random(n1, &mut rng).unwrap();
        let b = QuantumState::random(n2, &mut rng).unwrap();
        let c = QuantumState::random(n3, &mut rng).unwrap();
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!((left.norm() - 1.0).abs() < 1e-12);
        prop_assert!(left.max_abs_diff(&right) < 1e-15);
    }

    #[test]
    fn measurement_postconditions(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = seeded(seed);
        let s = QuantumState::random(n, &mut rng).unwrap();
        let u = UnitaryMap::random(1 << n, &mut rng);
        let rotated = s.apply(&u).unwrap();
        prop_assert!((rotated.norm() - 1.0).abs() < 1e-10);
        let ms = MeasurementSet::computational_basis(n).unwrap();
        let p = outcome_probabilities(&rotated, &ms).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(p.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
        let m = measure(&rotated, &ms, &mut rng).unwrap();
        prop_assert!((m.post_state.norm() - 1.0).abs() < 1e-10);
        prop_assert!(p[m.outcome] > 0.0);
    }

    #[test]
    fn residual_ignores_second_factor(seed in any::<u64>(), n in 1usize..3, extra in 1usize..3) {
        let mut rng = seeded(seed);
        let a = QuantumState::random(n, &mut rng).unwrap();
        let b = QuantumState::random(n, &mut rng).unwrap();
        let t = target_product(&a, &b, false).unwrap().first_register;
        let wrong = QuantumState::random(n, &mut rng).unwrap();
        let d1 = QuantumState::random(extra, &mut rng).unwrap();
        let d2 = QuantumState::random(extra, &mut rng).unwrap();
        let exact = ResidualReport::from_output(t.tensor(&d1).amplitudes(), &t).unwrap();
        prop_assert!(exact.total < 1e-12);
        let r1 = ResidualReport::from_output(wrong.tensor(&d1).amplitudes(), &t).unwrap();
        let r2 = ResidualReport::from_output(wrong.tensor(&d2).amplitudes(), &t).unwrap();
        prop_assert!((r1.total - r2.total).abs() < 1e-12);
        prop_assert!(r1.total >= 0.0 && r1.factor_infidelity <= 1.0);
    }

    #[test]
    fn epsilon_family_structure(eps in 0.001f64..0.999, n in 1usize..4) {
        let (a, b) = epsilon_states(eps, n).unwrap();
        let nonzero = a.tensor(&b).amplitudes().iter().filter(|z| z.norm() != 0.0).count();
        prop_assert_eq!(nonzero, 2);
        let t = target_product(&a, &b, false).unwrap();
        prop_assert!((t.lambda * eps - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constraint_surface_contradiction(m_log in 0u32..6, n_log in 1u32..6, s1 in any::<bool>(), s2 in any::<bool>()) {
        let (m, n) = (1usize << m_log, 1usize << n_log);
        let c2 = if s2 { 1.0 } else { -1.0 } / ((m * n) as f64).sqrt();
        let c1 = if s1 { c2 } else { -c2 };
        let r = normalization_contradiction_check(c1, c2, m, n).unwrap();
        prop_assert!(r.on_constraint_surface());
        prop_assert!(r.contradiction);
        prop_assert!((r.half_deviation().abs() - 3f64.sqrt() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn off_surface_points_also_contradict(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        prop_assert!(normalization_contradiction_check(c1, c2, 1, 2).unwrap().contradiction);
    }
}
