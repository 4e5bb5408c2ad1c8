//! Componentwise product by post-selection.
//!
//! Measuring `a (x) b` with `{M0, M1}`, where `M0` projects onto the labels
//! `|ii>`, leaves `lambda sum_i a_i b_i |ii>` on outcome 0. That outcome has
//! probability `sum_i |a_i b_i|^2`, which is `1/N` for uniform inputs.

use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{measure, sample_counts, MeasurementOperator, MeasurementSet, QuantumState};
use crate::rng::{derive_seed, seeded};

/// `{M0 = sum_i |ii><ii|, M1 = I - M0}` on two `n`-qubit registers.
pub fn diagonal_measurement(num_qubits: usize) -> Result<MeasurementSet> {
    if num_qubits == 0 {
        return Err(Error::invalid("need at least one qubit per register"));
    }
    let n = 1usize << num_qubits;
    let on_diagonal = move |label: usize| label / n == label % n;
    MeasurementSet::new(vec![
        MeasurementOperator::basis_projector(n * n, on_diagonal),
        MeasurementOperator::basis_projector(n * n, move |l| !on_diagonal(l)),
    ])
}

fn check_widths(a: &QuantumState, b: &QuantumState) -> Result<()> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::invalid(format!(
            "register widths differ: {} vs {}",
            a.num_qubits(),
            b.num_qubits()
        )));
    }
    Ok(())
}

/// `sum_i |a_i b_i|^2`.
pub fn success_probability(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    check_widths(a, b)?;
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x * y).norm_sqr())
        .sum())
}

/// Maps `sum_i c_i |ii>` on `2n` qubits to `sum_i c_i |i>` on `n` qubits.
/// Fails if the state has weight off the diagonal labels.
pub fn relabel_diagonal(s: &QuantumState) -> Result<QuantumState> {
    if !s.num_qubits().is_multiple_of(2) {
        return Err(Error::invalid(
            "diagonal relabeling needs an even qubit count",
        ));
    }
    let n = 1usize << (s.num_qubits() / 2);
    let off_diagonal: f64 = s
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(l, _)| l / n != l % n)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    if off_diagonal > 1e-20 {
        return Err(Error::invalid(format!(
            "state has weight {off_diagonal:e} outside the |ii> labels"
        )));
    }
    QuantumState::from_amplitudes((0..n).map(|i| s.amplitudes()[i * n + i]).collect())
}

/// Inverse of [`relabel_diagonal`]: `|i> -> |ii>`.
pub fn embed_diagonal(s: &QuantumState) -> QuantumState {
    let n = s.dim();
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); n * n];
    for (i, z) in s.amplitudes().iter().enumerate() {
        amps[i * n + i] = *z;
    }
    QuantumState::from_amplitudes(amps).expect("norm preserved")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostselectOutcome {
    pub success: bool,
    /// `lambda sum_i a_i b_i |ii>` when `success`.
    pub post_state: Option<QuantumState>,
    /// Analytic success probability for the input pair.
    pub probability: f64,
}

/// Prepares `a (x) b`, measures with [`diagonal_measurement`], and keeps the
/// post-measurement state when outcome 0 is observed.
pub fn attempt<R: Rng + ?Sized>(
    a: &QuantumState,
    b: &QuantumState,
    rng: &mut R,
) -> Result<PostselectOutcome> {
    let probability = success_probability(a, b)?;
    let ms = diagonal_measurement(a.num_qubits())?;
    let measured = measure(&a.tensor(b), &ms, rng)?;
    let success = measured.outcome == 0;
    Ok(PostselectOutcome {
        success,
        post_state: success.then_some(measured.post_state),
        probability,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `a = b = uniform superposition`.
    Uniform,
    /// `a`, `b` independent normalized complex Gaussian vectors.
    SeededRandom,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Family::Uniform),
            "seeded-random" => Ok(Family::SeededRandom),
            other => Err(Error::invalid(format!(
                "unknown family {other:?} (expected uniform or seeded-random)"
            ))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Uniform => "uniform",
            Family::SeededRandom => "seeded-random",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub family: Family,
    pub trials: u64,
    pub seed: u64,
}

/// One row per register width. `seed` is the row's derived seed, from which
/// both the random input pair (if any) and the trials are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    pub analytic_p: f64,
    pub empirical_p: f64,
    pub trials: u64,
    pub seed: u64,
}

impl ScanRow {
    /// Binomial standard deviation of `empirical_p`.
    pub fn sigma(&self) -> f64 {
        (self.analytic_p * (1.0 - self.analytic_p) / self.trials as f64).sqrt()
    }

    /// `|empirical - analytic| <= 3 sigma`.
    pub fn within_band(&self) -> bool {
        (self.empirical_p - self.analytic_p).abs() <= 3.0 * self.sigma()
    }
}

fn scan_row(n: usize, family: Family, trials: u64, seed: u64) -> Result<ScanRow> {
    let mut rng = seeded(seed);
    let dim = 1usize << n;
    let (a, b, analytic_p) = match family {
        Family::Uniform => {
            let u = QuantumState::uniform(n)?;
            // Closed form; the amplitude sum agrees to rounding.
            (u.clone(), u, 1.0 / dim as f64)
        }
        Family::SeededRandom => {
            let a = QuantumState::random(n, &mut rng)?;
            let b = QuantumState::random(n, &mut rng)?;
            let p = success_probability(&a, &b)?;
            (a, b, p)
        }
    };
    let ms = diagonal_measurement(n)?;
    let counts = sample_counts(&a.tensor(&b), &ms, trials, &mut rng)?;
    Ok(ScanRow {
        n,
        dim,
        analytic_p,
        empirical_p: counts[0] as f64 / trials as f64,
        trials,
        seed,
    })
}

/// Success statistics for each `n` in `n_min..=n_max`, in increasing `n`.
pub fn scan(config: &ScanConfig) -> Result<Vec<ScanRow>> {
    if config.trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if config.n_min == 0 || config.n_min > config.n_max {
        return Err(Error::invalid(format!(
            "invalid qubit range {}..{}",
            config.n_min, config.n_max
        )));
    }
    if config.n_max > 12 {
        return Err(Error::invalid(
            "scan supports at most 12 qubits per register",
        ));
    }
    (config.n_min..=config.n_max)
        .into_par_iter()
        .map(|n| {
            scan_row(
                n,
                config.family,
                config.trials,
                derive_seed(config.seed, n as u64),
            )
        })
        .collect()
}

/// CSV with header `n,N,analytic_p,empirical_p,trials,seed`.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nogo::target_product;
    use crate::qsim::outcome_probabilities;

    #[test]
    fn one_qubit_projector() {
        let ms = diagonal_measurement(1).unwrap();
        match &ms.operators()[0] {
            MeasurementOperator::Diagonal(d) => {
                let kept: Vec<f64> = d.iter().map(|z| z.re).collect();
                assert_eq!(kept, vec![1.0, 0.0, 0.0, 1.0]);
            }
            MeasurementOperator::Dense(_) => panic!("expected diagonal projector"),
        }
        assert_eq!(ms.completeness_deviation(), 0.0);
    }

    #[test]
    fn projector_rank() {
        for n in 1..=4 {
            let ms = diagonal_measurement(n).unwrap();
            let MeasurementOperator::Diagonal(d) = &ms.operators()[0] else {
                panic!()
            };
            let rank = d.iter().filter(|z| z.re == 1.0).count();
            assert_eq!(rank, 1 << n);
            assert_eq!(ms.completeness_deviation(), 0.0);
        }
    }

    #[test]
    fn success_probability_examples() {
        for n in 1..=6 {
            let u = QuantumState::uniform(n).unwrap();
            let p = success_probability(&u, &u).unwrap();
            assert!((p - 1.0 / (1 << n) as f64).abs() < 1e-15);
        }
        let z = QuantumState::basis(2, 0).unwrap();
        let o = QuantumState::basis(2, 1).unwrap();
        assert_eq!(success_probability(&z, &z).unwrap(), 1.0);
        assert_eq!(success_probability(&z, &o).unwrap(), 0.0);
        assert!(success_probability(&z, &QuantumState::basis(1, 0).unwrap()).is_err());
    }

    #[test]
    fn probability_equals_projector_weight() {
        let mut rng = seeded(77);
        for n in 1..=4 {
            let a = QuantumState::random(n, &mut rng).unwrap();
            let b = QuantumState::random(n, &mut rng).unwrap();
            let p =
                outcome_probabilities(&a.tensor(&b), &diagonal_measurement(n).unwrap()).unwrap();
            assert!((p[0] - success_probability(&a, &b).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn certain_success_on_zero_labels() {
        let z = QuantumState::basis(1, 0).unwrap();
        let mut rng = seeded(1);
        let out = attempt(&z, &z, &mut rng).unwrap();
        assert!(out.success);
        assert_eq!(out.post_state.unwrap(), QuantumState::basis(2, 0).unwrap());
        assert_eq!(out.probability, 1.0);
    }

    #[test]
    fn disjoint_support_never_succeeds() {
        let a = QuantumState::basis(1, 0).unwrap();
        let b = QuantumState::basis(1, 1).unwrap();
        let mut rng = seeded(2);
        for _ in 0..100 {
            let out = attempt(&a, &b, &mut rng).unwrap();
            assert!(!out.success && out.post_state.is_none());
            assert_eq!(out.probability, 0.0);
        }
    }

    #[test]
    fn uniform_three_qubits() {
        let u = QuantumState::uniform(3).unwrap();
        let mut rng = seeded(3);
        let trials = 10_000;
        let mut hits = 0;
        let want = embed_diagonal(&QuantumState::uniform(3).unwrap());
        for _ in 0..trials {
            let out = attempt(&u, &u, &mut rng).unwrap();
            if let Some(post) = out.post_state {
                hits += 1;
                assert!(post.max_abs_diff(&want) < 1e-10);
            }
        }
        let p = hits as f64 / trials as f64;
        let sigma = (0.125f64 * 0.875 / trials as f64).sqrt();
        assert!((p - 0.125).abs() <= 3.0 * sigma, "{p}");
    }

    #[test]
    fn post_state_is_componentwise_product() {
        let mut rng = seeded(5);
        let a = QuantumState::random(3, &mut rng).unwrap();
        let b = QuantumState::random(3, &mut rng).unwrap();
        let target = target_product(&a, &b, false).unwrap().first_register;
        let post = loop {
            if let Some(s) = attempt(&a, &b, &mut rng).unwrap().post_state {
                break s;
            }
        };
        assert!(relabel_diagonal(&post).unwrap().max_abs_diff(&target) < 1e-10);
    }

    #[test]
    fn relabel_rejects_off_diagonal() {
        assert!(relabel_diagonal(&QuantumState::uniform(2).unwrap()).is_err());
        assert!(relabel_diagonal(&QuantumState::uniform(3).unwrap()).is_err());
    }

    #[test]
    fn uniform_scan_closed_form() {
        let rows = scan(&ScanConfig {
            n_min: 1,
            n_max: 6,
            family: Family::Uniform,
            trials: 2000,
            seed: 9,
        })
        .unwrap();
        for (row, n) in rows.iter().zip(1..) {
            assert_eq!(row.n, n);
            assert_eq!(row.analytic_p, 1.0 / (1u64 << n) as f64);
        }
        assert!(rows.windows(2).all(|w| w[1].analytic_p < w[0].analytic_p));
    }

    #[test]
    fn scan_validation() {
        let cfg = ScanConfig {
            n_min: 1,
            n_max: 3,
            family: Family::Uniform,
            trials: 0,
            seed: 0,
        };
        assert!(scan(&cfg).is_err());
        assert!(scan(&ScanConfig {
            trials: 10,
            n_min: 4,
            ..cfg
        })
        .is_err());
        assert!(scan(&ScanConfig {
            trials: 10,
            n_min: 0,
            ..cfg
        })
        .is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = scan(&ScanConfig {
            n_min: 1,
            n_max: 2,
            family: Family::Uniform,
            trials: 10,
            seed: 1,
        })
        .unwrap();
        let mut out = Vec::new();
        write_scan_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,N,analytic_p,empirical_p,trials,seed"));
        assert!(lines.next().unwrap().starts_with("1,2,0.5,"));
        assert!(lines.next().unwrap().starts_with("2,4,0.25,"));
    }

    #[test]
    fn family_parsing() {
        assert_eq!("uniform".parse::<Family>().unwrap(), Family::Uniform);
        assert_eq!(
            "seeded-random".parse::<Family>().unwrap(),
            Family::SeededRandom
        );
        assert!("gaussian".parse::<Family>().is_err());
        assert_eq!(Family::SeededRandom.to_string(), "seeded-random");
    }
}
