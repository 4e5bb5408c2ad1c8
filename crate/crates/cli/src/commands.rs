use std::time::Instant;

use qconv_core::io::{read_sequence, read_state, sequence_to_json};
use qconv_core::nogo::{
    normalization_contradiction_check, reduce_convolution, reduce_correlation,
    search_best_candidate, target_product, ClassicalOracle, ProbeSetRegistry, SearchConfig,
    SearchReport,
};
use qconv_core::postselect::{scan, write_scan_csv, Family, ScanConfig};
use qconv_core::qsim::{iqft_dense, qft_circuit, qft_dense, QuantumState};
use qconv_core::rng::seeded;
use qconv_core::spectral::{
    convolve_direct, convolve_fast, correlate_direct, correlate_fast, dft, idft, ComplexSequence,
};
use qconv_core::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use crate::config::{Command, Format, Settings};

/// Largest register the dense QFT check will build.
const QFT_CHECK_MAX_QUBITS: usize = 10;

pub struct Outcome {
    pub construction: &'static str,
    pub tolerances: Vec<(&'static str, f64)>,
    pub results: Value,
    pub violations: Vec<String>,
    /// Data file contents for `--output`; the report is written instead when absent.
    pub artifact: Option<String>,
}

pub fn run(command: Command, s: &Settings) -> Result<Outcome, String> {
    match command {
        Command::Conv => sequence_product(s, false),
        Command::Corr => sequence_product(s, true),
        Command::QftCheck => qft_check(s),
        Command::Reduction => reduction(s),
        Command::NogoAnalytic => nogo_analytic(s),
        Command::NogoSearch => nogo_search(s),
        Command::PostselectScan => postselect_scan(s),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn pairs(values: &[Complex64]) -> Value {
    values.iter().map(|z| json!([z.re, z.im])).collect()
}

fn two_inputs(s: &Settings) -> Result<(&std::path::Path, &std::path::Path), String> {
    match s.inputs.as_slice() {
        [a, b] => Ok((a, b)),
        other => Err(format!("expected two --input files, got {}", other.len())),
    }
}

fn sequence_product(s: &Settings, correlate: bool) -> Result<Outcome, String> {
    let (pa, pb) = two_inputs(s)?;
    let read = |p: &std::path::Path| read_sequence(p).map_err(|e| format!("{}: {e}", p.display()));
    let (a, b) = (read(pa)?, read(pb)?);
    let direct = if correlate {
        correlate_direct(&a, &b)
    } else {
        convolve_direct(&a, &b)
    }
    .map_err(err)?;
    let n = a.len();
    // Errors grow with the size of the operands.
    let scale = (a.norm() * b.norm()).max(1.0);
    let mut violations = Vec::new();

    let fast_diff = if n.is_power_of_two() {
        let fast = if correlate {
            correlate_fast(&a, &b)
        } else {
            convolve_fast(&a, &b)
        }
        .map_err(err)?;
        Some(direct.max_abs_diff(&fast))
    } else {
        None
    };
    if let Some(d) = fast_diff.filter(|&d| d > s.tol * scale) {
        violations.push(format!("direct and fast results differ by {d:.3e}"));
    }

    let (fa, fb, fr) = (dft(&a), dft(&b), dft(&direct));
    let root_n = (n as f64).sqrt();
    let theorem_diff = (0..n)
        .map(|k| {
            let lhs = if correlate { fa[k].conj() } else { fa[k] };
            (fr[k] - root_n * lhs * fb[k]).norm()
        })
        .fold(0.0, f64::max);
    if theorem_diff > s.tol * scale {
        violations.push(format!(
            "transform of the result misses the spectral product by {theorem_diff:.3e}"
        ));
    }

    let mut results = json!({
        "length": n,
        "tolerance_scale": scale,
        "direct_vs_fast_max_diff": fast_diff,
        "spectral_identity_max_diff": theorem_diff,
    });
    if s.output.is_none() {
        results["result"] = pairs(direct.as_slice());
    }
    Ok(Outcome {
        construction: if correlate {
            "cyclic correlation under the unitary DFT"
        } else {
            "cyclic convolution under the unitary DFT"
        },
        tolerances: vec![("agreement", s.tol)],
        results,
        violations,
        artifact: Some(sequence_to_json(&direct)),
    })
}

fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

fn qft_check(s: &Settings) -> Result<Outcome, String> {
    if s.n.max > QFT_CHECK_MAX_QUBITS {
        return Err(format!(
            "qft-check supports at most {QFT_CHECK_MAX_QUBITS} qubits"
        ));
    }
    let circuit_tol = 10.0 * s.tol;
    let mut rng = seeded(s.seed);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in s.n.min..=s.n.max {
        let (q, iq) = (qft_dense(n).map_err(err)?, iqft_dense(n).map_err(err)?);
        let circuit = qft_circuit(n).map_err(err)?;
        let mut amplitude_diff: f64 = 0.0;
        let mut circuit_state_diff: f64 = 0.0;
        for _ in 0..s.trials {
            let st = QuantumState::random(n, &mut rng).map_err(err)?;
            let seq = ComplexSequence::new(st.amplitudes().to_vec()).map_err(err)?;
            let want = dft(&seq);
            let fwd = st.apply(&q).map_err(err)?;
            let inv = st.apply(&iq).map_err(err)?;
            let circ = circuit.apply(&st).map_err(err)?;
            amplitude_diff = amplitude_diff
                .max(max_diff(fwd.amplitudes(), want.as_slice()))
                .max(max_diff(inv.amplitudes(), idft(&seq).as_slice()));
            circuit_state_diff =
                circuit_state_diff.max(max_diff(circ.amplitudes(), want.as_slice()));
        }
        let matrix_diff = circuit.to_matrix().max_abs_diff(q.as_linear());
        let expected = (n * (n + 1) / 2, n / 2);
        let counts = (circuit.rotation_count(), circuit.swap_count());
        if amplitude_diff > s.tol {
            violations.push(format!(
                "n={n}: QFT amplitudes differ from the DFT by {amplitude_diff:.3e}"
            ));
        }
        if matrix_diff.max(circuit_state_diff) > circuit_tol {
            violations.push(format!(
                "n={n}: circuit differs from the dense QFT by {:.3e}",
                matrix_diff.max(circuit_state_diff)
            ));
        }
        if counts != expected {
            violations.push(format!(
                "n={n}: gate counts {counts:?}, expected {expected:?}"
            ));
        }
        rows.push(json!({
            "n": n,
            "amplitude_max_diff": amplitude_diff,
            "circuit_state_max_diff": circuit_state_diff,
            "circuit_matrix_max_diff": matrix_diff,
            "rotation_gates": counts.0,
            "swap_gates": counts.1,
        }));
    }
    Ok(Outcome {
        construction: "quantum Fourier transform as the unitary DFT",
        tolerances: vec![("amplitude", s.tol), ("circuit", circuit_tol)],
        results: json!({ "trials_per_n": s.trials, "rows": rows }),
        violations,
        artifact: None,
    })
}

fn reduction(s: &Settings) -> Result<Outcome, String> {
    let pairs_in: Vec<(QuantumState, QuantumState)> = if s.inputs.is_empty() {
        let n = s.n.exact()?;
        if n > 6 {
            return Err("reduction builds dense 4^n maps; use at most 6 qubits".to_string());
        }
        let mut rng = seeded(s.seed);
        (0..s.trials)
            .map(|_| {
                let a = QuantumState::random(n, &mut rng)?;
                let b = QuantumState::random(n, &mut rng)?;
                Ok((a, b))
            })
            .collect::<qconv_core::Result<_>>()
            .map_err(err)?
    } else {
        let (pa, pb) = two_inputs(s)?;
        let read = |p: &std::path::Path| read_state(p).map_err(|e| format!("{}: {e}", p.display()));
        let pair = (read(pa)?, read(pb)?);
        if pair.0.num_qubits() > 6 {
            return Err("reduction builds dense 4^n maps; use at most 6 qubits".to_string());
        }
        vec![pair]
    };

    let mut conv_diff: f64 = 0.0;
    let mut corr_diff: f64 = 0.0;
    let mut single = None;
    for (a, b) in &pairs_in {
        let conv = reduce_convolution(&ClassicalOracle, a, b).map_err(err)?;
        let corr = reduce_correlation(&ClassicalOracle, a, b).map_err(err)?;
        let want_conv = target_product(a, b, false).map_err(err)?.first_register;
        let want_corr = target_product(a, b, true).map_err(err)?.first_register;
        conv_diff = conv_diff.max(conv.max_abs_diff(&want_conv));
        corr_diff = corr_diff.max(corr.max_abs_diff(&want_corr));
        if pairs_in.len() == 1 {
            single = Some(json!({
                "convolution_output": pairs(conv.amplitudes()),
                "correlation_output": pairs(corr.amplitudes()),
            }));
        }
    }
    let mut violations = Vec::new();
    for (name, d) in [("convolution", conv_diff), ("correlation", corr_diff)] {
        if d > s.tol {
            violations.push(format!(
                "{name} reduction deviates from the elementwise product by {d:.3e}"
            ));
        }
    }
    let mut results = json!({
        "pairs": pairs_in.len(),
        "num_qubits": pairs_in[0].0.num_qubits(),
        "convolution_max_deviation": conv_diff,
        "correlation_max_deviation": corr_diff,
    });
    if let Some(v) = single {
        results["outputs"] = v;
    }
    Ok(Outcome {
        construction: "QFT reduction from convolution to the elementwise product",
        tolerances: vec![("deviation", s.tol)],
        results,
        violations,
        artifact: None,
    })
}

fn nogo_analytic(s: &Settings) -> Result<Outcome, String> {
    let n_qubits = s.n.exact()?;
    if n_qubits >= 32 {
        return Err("register too large".to_string());
    }
    let (m, n) = (s.ancilla_dim, 1usize << n_qubits);
    let half = 3f64.sqrt() / 2.0;
    let mut violations = Vec::new();

    let points: Vec<(f64, f64)> = match (s.c1, s.c2) {
        (Some(c1), Some(c2)) => vec![(c1, c2)],
        (None, None) => {
            let c = 1.0 / ((m * n) as f64).sqrt();
            vec![(c, c), (-c, c), (c, -c), (-c, -c)]
        }
        _ => return Err("give both --c1 and --c2, or neither".to_string()),
    };
    let mut reports = Vec::new();
    for (c1, c2) in points {
        let r = normalization_contradiction_check(c1, c2, m, n).map_err(err)?;
        if !r.contradiction {
            violations.push(format!("no contradiction at C1={c1}, C2={c2}"));
        }
        let on_surface = r.on_constraint_surface();
        let half_gap = (r.half_deviation().abs() - half).abs();
        if on_surface && half_gap > s.tol {
            violations.push(format!(
                "C1={c1}, C2={c2}: |f(1/2) - 1| misses sqrt(3)/2 by {half_gap:.3e}"
            ));
        }
        reports.push(json!({
            "report": r,
            "on_constraint_surface": on_surface,
            "half_deviation": r.half_deviation(),
        }));
    }

    // Arbitrary coefficients never satisfy all three constraints either.
    let mut rng = seeded(s.seed);
    let mut random_failures = 0u64;
    for _ in 0..s.trials {
        let c1 = rng.random_range(-2.0..2.0);
        let c2 = rng.random_range(-2.0..2.0);
        if !normalization_contradiction_check(c1, c2, m, n)
            .map_err(err)?
            .contradiction
        {
            random_failures += 1;
        }
    }
    if random_failures > 0 {
        violations.push(format!(
            "{random_failures} random coefficient pairs satisfied every constraint"
        ));
    }

    Ok(Outcome {
        construction: "epsilon-family normalization contradiction",
        tolerances: vec![("half_point", s.tol)],
        results: json!({
            "M": m,
            "N": n,
            "points": reports,
            "random_points": s.trials,
            "random_points_without_contradiction": random_failures,
        }),
        violations,
        artifact: None,
    })
}

fn nogo_search(s: &Settings) -> Result<Outcome, String> {
    let n_qubits = s.n.exact()?;
    if n_qubits > 4 {
        return Err("nogo-search supports at most 4 register qubits".to_string());
    }
    let registry = match &s.probe_config {
        Some(p) => ProbeSetRegistry::from_path(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => ProbeSetRegistry::builtin(),
    };
    let probes = registry.get(&s.probe_set).map_err(err)?;
    let register_dim = 1usize << n_qubits;
    if probes.register_dim() != register_dim {
        return Err(format!(
            "probe set {} has register dimension {}, but --n {n_qubits} asks for {register_dim}",
            probes.id(),
            probes.register_dim()
        ));
    }
    let config = SearchConfig {
        register_dim,
        ancilla_dim: s.ancilla_dim,
        restarts: s.restarts,
        budget: s.budget,
        seed: s.seed,
    };
    let start = Instant::now();
    let outcome = search_best_candidate(&config, &probes).map_err(err)?;
    let report = SearchReport::new(&config, &probes, &outcome, start.elapsed().as_millis());
    let mut violations = Vec::new();
    if report.best_residual <= s.tol {
        violations.push(format!(
            "candidate from restart {} matches every probe to {:.3e}",
            report.best_restart, report.best_residual
        ));
    }
    let artifact = serde_json::to_string_pretty(&report).map_err(err)? + "\n";
    Ok(Outcome {
        construction: "numerical search for an elementwise-product process",
        tolerances: vec![("floor", s.tol)],
        results: serde_json::to_value(&report).map_err(err)?,
        violations,
        artifact: Some(artifact),
    })
}

fn postselect_scan(s: &Settings) -> Result<Outcome, String> {
    let rows = scan(&ScanConfig {
        n_min: s.n.min,
        n_max: s.n.max,
        family: s.family,
        trials: s.trials,
        seed: s.seed,
    })
    .map_err(err)?;
    let mut violations = Vec::new();
    for r in &rows {
        if !r.within_band() {
            violations.push(format!(
                "n={}: empirical {} outside 3 sigma of {}",
                r.n, r.empirical_p, r.analytic_p
            ));
        }
        if s.family == Family::Uniform && (r.analytic_p - 1.0 / r.dim as f64).abs() > s.tol {
            violations.push(format!(
                "n={}: analytic probability {} is not 1/N",
                r.n, r.analytic_p
            ));
        }
    }
    let artifact = match s.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_scan_csv(&rows, &mut buf).map_err(err)?;
            String::from_utf8(buf).map_err(err)?
        }
        Format::Json => serde_json::to_string_pretty(&rows).map_err(err)? + "\n",
    };
    Ok(Outcome {
        construction: "post-selected diagonal measurement",
        tolerances: vec![("closed_form", s.tol), ("sigma_band", 3.0)],
        results: json!({ "rows": rows }),
        violations,
        artifact: Some(artifact),
    })
}
