//! Random-restart search for the linear candidate (map plus ancilla) that
//! comes closest to producing the componentwise-product target on every
//! probe input.
//!
//! The objective is the worst-case [`ResidualReport::total`] over a probe
//! set. Each restart runs L-BFGS descent on a log-sum-exp smoothing of the
//! maximum (with the norm-deviation kink rounded off at the same scale),
//! cooling the temperature in stages; gradients are central finite
//! differences over the real and imaginary parts of every map entry and
//! ancilla amplitude. A perturbation of one map entry changes a single
//! output amplitude per probe, so those differences are evaluated by
//! updating cached norms and overlaps instead of re-applying the map.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::residual::{residual, CandidateProcess, ResidualReport};
use super::target::target_product;
use crate::error::{Error, Result};
use crate::qsim::{LinearMap, QuantumState};
use crate::rng::{complex_gaussian_vec, derive_seed, seeded};

const BUILTIN_PROBE_SETS: &str = include_str!("../../config/probe_sets.json");

/// Central-difference step.
const FD_STEP: f64 = 1e-6;
/// Smoothing temperature at the first and last iteration.
const TEMPERATURE_START: f64 = 5e-2;
const TEMPERATURE_END: f64 = 1e-5;
/// Number of temperature stages the budget is split across.
const STAGES: usize = 8;
const INITIAL_STEP: f64 = 0.05;
const MIN_STEP: f64 = 1e-16;
const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub label: String,
    pub a: QuantumState,
    pub b: QuantumState,
    pub conjugate_first: bool,
}

/// A named, nonempty list of probe inputs on equal-width registers.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    id: String,
    probes: Vec<Probe>,
}

impl ProbeSet {
    pub fn new(id: impl Into<String>, probes: Vec<Probe>) -> Result<Self> {
        let first = probes
            .first()
            .ok_or_else(|| Error::invalid("probe set must be nonempty"))?;
        let dim = first.a.dim();
        for p in &probes {
            if p.a.dim() != dim || p.b.dim() != dim {
                return Err(Error::invalid(format!(
                    "probe {} has a register width different from the set",
                    p.label
                )));
            }
            target_product(&p.a, &p.b, p.conjugate_first)?;
        }
        Ok(Self {
            id: id.into(),
            probes,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }

    pub fn register_dim(&self) -> usize {
        self.probes[0].a.dim()
    }
}

/// Serialized form of a probe set: epsilon-family members plus a grid of
/// real product pairs `a = cos(t)|0> + sin(t)|1>`, `b = cos(u)|0> + sin(u)|1>`
/// with `t, u` drawn from `product_angles_over_pi` (in units of pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSetDefinition {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub register_qubits: usize,
    #[serde(default)]
    pub conjugate_first: bool,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub product_angles_over_pi: Vec<f64>,
}

impl ProbeSetDefinition {
    pub fn build(&self) -> Result<ProbeSet> {
        let n = self.register_qubits;
        let dim = 1usize
            .checked_shl(n as u32)
            .filter(|_| n >= 1)
            .ok_or_else(|| Error::invalid("register_qubits must be at least 1"))?;
        let mut probes = Vec::new();
        for &eps in &self.epsilons {
            let (a, b) = super::epsilon_states(eps, n)?;
            probes.push(Probe {
                label: format!("eps={eps}"),
                a,
                b,
                conjugate_first: self.conjugate_first,
            });
        }
        let rotated = |angle: f64| {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[0] = Complex64::new((angle * PI).cos(), 0.0);
            v[1] = Complex64::new((angle * PI).sin(), 0.0);
            QuantumState::normalized(v)
        };
        for &t in &self.product_angles_over_pi {
            for &u in &self.product_angles_over_pi {
                probes.push(Probe {
                    label: format!("product(t={t}pi,u={u}pi)"),
                    a: rotated(t)?,
                    b: rotated(u)?,
                    conjugate_first: self.conjugate_first,
                });
            }
        }
        ProbeSet::new(self.id.clone(), probes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSetRegistry {
    pub probe_sets: Vec<ProbeSetDefinition>,
}

impl ProbeSetRegistry {
    /// The versioned probe sets shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_PROBE_SETS).expect("bundled probe set file is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, id: &str) -> Result<ProbeSet> {
        self.probe_sets
            .iter()
            .find(|d| d.id == id)
            .ok_or_else(|| Error::invalid(format!("unknown probe set {id:?}")))?
            .build()
    }

    pub fn standard() -> ProbeSet {
        Self::builtin()
            .get("standard-v1")
            .expect("standard-v1 is bundled")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// `N`, the dimension of each input register.
    pub register_dim: usize,
    /// `M`, the ancilla dimension.
    pub ancilla_dim: usize,
    pub restarts: usize,
    /// Descent iterations per restart.
    pub budget: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub candidate: CandidateProcess,
    pub worst_case_residual: f64,
    pub per_probe_residuals: Vec<ResidualReport>,
    pub best_restart: usize,
    /// Worst-case residual reached by each restart, in restart order.
    pub restart_residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResidual {
    pub label: String,
    #[serde(flatten)]
    pub residual: ResidualReport,
}

/// Machine-readable summary of one search run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    #[serde(rename = "N")]
    pub register_dim: usize,
    #[serde(rename = "M")]
    pub ancilla_dim: usize,
    pub seed: u64,
    pub restarts: usize,
    pub budget: usize,
    pub probe_set_id: String,
    pub best_residual: f64,
    pub best_restart: usize,
    pub per_probe_residuals: Vec<ProbeResidual>,
    pub wall_time_ms: u128,
}

impl SearchReport {
    pub fn new(
        config: &SearchConfig,
        probes: &ProbeSet,
        outcome: &SearchOutcome,
        wall_time_ms: u128,
    ) -> Self {
        Self {
            register_dim: config.register_dim,
            ancilla_dim: config.ancilla_dim,
            seed: config.seed,
            restarts: config.restarts,
            budget: config.budget,
            probe_set_id: probes.id().to_string(),
            best_residual: outcome.worst_case_residual,
            best_restart: outcome.best_restart,
            per_probe_residuals: probes
                .probes()
                .iter()
                .zip(&outcome.per_probe_residuals)
                .map(|(p, r)| ProbeResidual {
                    label: p.label.clone(),
                    residual: *r,
                })
                .collect(),
            wall_time_ms,
        }
    }
}

/// Minimizes the worst-case residual over `probes` across `restarts`
/// independent descents; restart `k` is seeded with `derive_seed(seed, k)`.
/// Ties go to the lowest restart index.
pub fn search_best_candidate(config: &SearchConfig, probes: &ProbeSet) -> Result<SearchOutcome> {
    let n = config.register_dim;
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::invalid(format!(
            "register dimension must be 2^n with n >= 1, got {n}"
        )));
    }
    if config.ancilla_dim == 0 || !config.ancilla_dim.is_power_of_two() {
        return Err(Error::invalid(format!(
            "ancilla dimension must be a power of two, got {}",
            config.ancilla_dim
        )));
    }
    if config.restarts == 0 || config.budget == 0 {
        return Err(Error::invalid("restarts and budget must be positive"));
    }
    if probes.register_dim() != n {
        return Err(Error::invalid(format!(
            "probe set {} uses {}-dimensional registers, search expects {n}",
            probes.id(),
            probes.register_dim()
        )));
    }

    let problem = Problem::new(probes, n, config.ancilla_dim);
    let runs: Vec<(f64, Vec<f64>)> = (0..config.restarts)
        .into_par_iter()
        .map(|k| problem.descend(config.budget, derive_seed(config.seed, k as u64)))
        .collect();

    let (best_restart, _) = runs
        .iter()
        .enumerate()
        .min_by(|(i, x), (j, y)| x.0.total_cmp(&y.0).then(i.cmp(j)))
        .expect("at least one restart");
    let candidate = problem.candidate(&runs[best_restart].1)?;

    // Re-score through the public residual path.
    let per_probe_residuals = probes
        .probes()
        .iter()
        .map(|p| residual(&candidate, &p.a, &p.b, p.conjugate_first))
        .collect::<Result<Vec<_>>>()?;
    let worst_case_residual = per_probe_residuals
        .iter()
        .map(|r| r.total)
        .fold(0.0, f64::max);

    Ok(SearchOutcome {
        candidate,
        worst_case_residual,
        per_probe_residuals,
        best_restart,
        restart_residuals: runs.iter().map(|r| r.0).collect(),
    })
}

struct PreparedProbe {
    /// `a (x) b`
    joint: Vec<Complex64>,
    /// Conjugated target first register.
    target_conj: Vec<Complex64>,
}

/// Per-probe cached quantities at a parameter point.
struct ProbeCache {
    input: Vec<Complex64>,
    output: Vec<Complex64>,
    /// `v_r = sum_i conj(t_i) phi[i, r]`
    projection: Vec<Complex64>,
    norm_sqr: f64,
    overlap: f64,
}

struct Problem {
    probes: Vec<PreparedProbe>,
    register_dim: usize,
    ancilla_dim: usize,
    /// `N * N * M`
    dim: usize,
    /// `N * M`, size of everything after the first register.
    rest: usize,
}

impl Problem {
    fn new(set: &ProbeSet, register_dim: usize, ancilla_dim: usize) -> Self {
        let probes = set
            .probes()
            .iter()
            .map(|p| {
                let t = target_product(&p.a, &p.b, p.conjugate_first).expect("validated");
                PreparedProbe {
                    joint: p.a.tensor(&p.b).into_amplitudes(),
                    target_conj: t
                        .first_register
                        .amplitudes()
                        .iter()
                        .map(|z| z.conj())
                        .collect(),
                }
            })
            .collect();
        let dim = register_dim * register_dim * ancilla_dim;
        Self {
            probes,
            register_dim,
            ancilla_dim,
            dim,
            rest: dim / register_dim,
        }
    }

    fn param_len(&self) -> usize {
        2 * self.dim * self.dim + 2 * self.ancilla_dim
    }

    fn map_entry(params: &[f64], idx: usize) -> Complex64 {
        Complex64::new(params[2 * idx], params[2 * idx + 1])
    }

    fn ancilla(&self, params: &[f64]) -> Option<Vec<Complex64>> {
        let off = 2 * self.dim * self.dim;
        let raw: Vec<Complex64> = (0..self.ancilla_dim)
            .map(|k| Complex64::new(params[off + 2 * k], params[off + 2 * k + 1]))
            .collect();
        let norm = crate::spectral::l2_norm(&raw);
        (norm > 0.0 && norm.is_finite()).then(|| raw.into_iter().map(|z| z / norm).collect())
    }

    fn candidate(&self, params: &[f64]) -> Result<CandidateProcess> {
        let entries = (0..self.dim * self.dim)
            .map(|i| Self::map_entry(params, i))
            .collect();
        let map = LinearMap::new(self.dim, self.dim, entries)?;
        let ancilla = self
            .ancilla(params)
            .ok_or_else(|| Error::invalid("search produced a zero ancilla"))?;
        CandidateProcess::new(map, ancilla, self.register_dim)
    }

    fn evaluate(&self, params: &[f64]) -> Option<Vec<ProbeCache>> {
        let ancilla = self.ancilla(params)?;
        let caches = self
            .probes
            .iter()
            .map(|p| {
                let input: Vec<Complex64> = p
                    .joint
                    .iter()
                    .flat_map(|x| ancilla.iter().map(move |c| x * c))
                    .collect();
                let output: Vec<Complex64> = (0..self.dim)
                    .map(|r| {
                        (0..self.dim)
                            .map(|c| Self::map_entry(params, r * self.dim + c) * input[c])
                            .sum()
                    })
                    .collect();
                let projection: Vec<Complex64> = (0..self.rest)
                    .map(|r| {
                        p.target_conj
                            .iter()
                            .enumerate()
                            .map(|(i, t)| t * output[i * self.rest + r])
                            .sum()
                    })
                    .collect();
                ProbeCache {
                    norm_sqr: output.iter().map(|z| z.norm_sqr()).sum(),
                    overlap: projection.iter().map(|z| z.norm_sqr()).sum(),
                    input,
                    output,
                    projection,
                }
            })
            .collect();
        Some(caches)
    }

    fn smooth_totals(caches: &[ProbeCache], temperature: f64, out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            caches
                .iter()
                .map(|c| smooth_residual(c.norm_sqr, c.overlap, temperature)),
        );
    }

    fn totals(caches: &[ProbeCache]) -> Vec<f64> {
        caches
            .iter()
            .map(|c| ResidualReport::from_moments(c.norm_sqr, c.overlap).total)
            .collect()
    }

    fn smoothed(&self, params: &[f64], temperature: f64) -> f64 {
        let mut buf = Vec::with_capacity(self.probes.len());
        self.evaluate(params)
            .map(|c| {
                Self::smooth_totals(&c, temperature, &mut buf);
                soft_max(&buf, temperature)
            })
            .unwrap_or(f64::INFINITY)
    }

    /// Smoothed objective with its finite-difference gradient.
    fn objective_and_gradient(
        &self,
        params: &[f64],
        temperature: f64,
        buf: &mut Vec<f64>,
    ) -> Option<(f64, Vec<f64>)> {
        let caches = self.evaluate(params)?;
        Self::smooth_totals(&caches, temperature, buf);
        let value = soft_max(buf, temperature);
        let mut grad = vec![0.0; self.param_len()];

        for r in 0..self.dim {
            let (first, rest_idx) = (r / self.rest, r % self.rest);
            for c in 0..self.dim {
                let idx = r * self.dim + c;
                for (part, unit) in [(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.0, 1.0))] {
                    let mut side = |h: f64| {
                        buf.clear();
                        for (cache, p) in caches.iter().zip(&self.probes) {
                            let delta = unit * h * cache.input[c];
                            let old = cache.output[r];
                            let new = old + delta;
                            let norm_sqr = cache.norm_sqr - old.norm_sqr() + new.norm_sqr();
                            let v_old = cache.projection[rest_idx];
                            let v_new = v_old + p.target_conj[first] * delta;
                            let overlap = cache.overlap - v_old.norm_sqr() + v_new.norm_sqr();
                            buf.push(smooth_residual(norm_sqr, overlap, temperature));
                        }
                        soft_max(buf, temperature)
                    };
                    let plus = side(FD_STEP);
                    let minus = side(-FD_STEP);
                    grad[2 * idx + part] = (plus - minus) / (2.0 * FD_STEP);
                }
            }
        }

        let off = 2 * self.dim * self.dim;
        let mut probe = params.to_vec();
        for k in off..self.param_len() {
            let orig = probe[k];
            probe[k] = orig + FD_STEP;
            let plus = self.smoothed(&probe, temperature);
            probe[k] = orig - FD_STEP;
            let minus = self.smoothed(&probe, temperature);
            probe[k] = orig;
            grad[k] = (plus - minus) / (2.0 * FD_STEP);
        }
        Some((value, grad))
    }

    fn initial_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let scale = 1.0 / (self.dim as f64).sqrt();
        let mut params = Vec::with_capacity(self.param_len());
        for z in complex_gaussian_vec(rng, self.dim * self.dim) {
            params.push(z.re * scale);
            params.push(z.im * scale);
        }
        for z in complex_gaussian_vec(rng, self.ancilla_dim) {
            params.push(z.re);
            params.push(z.im);
        }
        params
    }

    fn worst_case(&self, params: &[f64]) -> f64 {
        self.evaluate(params)
            .map(|c| Self::totals(&c).into_iter().fold(0.0, f64::max))
            .unwrap_or(f64::INFINITY)
    }

    /// One restart; returns the best worst-case residual seen and its point.
    ///
    /// The budget is split over [`STAGES`] temperatures; each stage runs
    /// L-BFGS with Armijo backtracking from where the previous one stopped.
    fn descend(&self, budget: usize, seed: u64) -> (f64, Vec<f64>) {
        let mut rng = seeded(seed);
        let mut x = self.initial_point(&mut rng);
        let mut best = (self.worst_case(&x), x.clone());
        let mut buf = Vec::with_capacity(self.probes.len());
        let stages = STAGES.min(budget);

        for stage in 0..stages {
            let iterations = budget / stages + usize::from(stage < budget % stages);
            let frac = if stages > 1 {
                stage as f64 / (stages - 1) as f64
            } else {
                1.0
            };
            let temperature = TEMPERATURE_START * (TEMPERATURE_END / TEMPERATURE_START).powf(frac);
            let Some((mut value, mut grad)) =
                self.objective_and_gradient(&x, temperature, &mut buf)
            else {
                break;
            };
            let mut memory = Lbfgs::default();
            for _ in 0..iterations {
                let mut dir = memory.direction(&grad);
                let mut slope = dot(&dir, &grad);
                if slope.is_nan() || slope >= 0.0 {
                    memory.clear();
                    dir = grad.iter().map(|g| -g).collect();
                    slope = -dot(&grad, &grad);
                }
                if slope == 0.0 || !slope.is_finite() {
                    break;
                }
                let mut step = if memory.is_empty() {
                    (INITIAL_STEP / slope.abs().sqrt()).min(1.0)
                } else {
                    1.0
                };
                let mut accepted = None;
                while step >= MIN_STEP {
                    let trial: Vec<f64> = x.iter().zip(&dir).map(|(p, d)| p + step * d).collect();
                    if self.smoothed(&trial, temperature) <= value + ARMIJO * step * slope {
                        accepted = Some(trial);
                        break;
                    }
                    step *= 0.5;
                }
                let Some(next) = accepted else { break };
                let Some((next_value, next_grad)) =
                    self.objective_and_gradient(&next, temperature, &mut buf)
                else {
                    break;
                };
                memory.push(
                    next.iter().zip(&x).map(|(a, b)| a - b).collect(),
                    next_grad.iter().zip(&grad).map(|(a, b)| a - b).collect(),
                );
                x = next;
                value = next_value;
                grad = next_grad;

                let worst = self.worst_case(&x);
                if worst < best.0 {
                    best = (worst, x.clone());
                }
            }
        }
        best
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Limited-memory BFGS curvature pairs.
#[derive(Default)]
struct Lbfgs {
    pairs: std::collections::VecDeque<(Vec<f64>, Vec<f64>, f64)>,
}

impl Lbfgs {
    const HISTORY: usize = 12;

    fn clear(&mut self) {
        self.pairs.clear();
    }

    fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn push(&mut self, s: Vec<f64>, y: Vec<f64>) {
        let sy = dot(&s, &y);
        if sy <= 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            return;
        }
        if self.pairs.len() == Self::HISTORY {
            self.pairs.pop_front();
        }
        self.pairs.push_back((s, y, 1.0 / sy));
    }

    /// Two-loop recursion: `-H g`.
    fn direction(&self, grad: &[f64]) -> Vec<f64> {
        let mut q = grad.to_vec();
        let mut alphas = Vec::with_capacity(self.pairs.len());
        for (s, y, rho) in self.pairs.iter().rev() {
            let a = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= a * yi;
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = self.pairs.back() {
            let gamma = dot(s, y) / dot(y, y);
            for qi in q.iter_mut() {
                *qi *= gamma;
            }
        }
        for ((s, y, rho), a) in self.pairs.iter().zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (a - b) * si;
            }
        }
        q.iter().map(|v| -v).collect()
    }
}

/// Residual total with the `| ||phi|| - 1 |` kink rounded off at scale `T`.
fn smooth_residual(norm_sqr: f64, overlap: f64, temperature: f64) -> f64 {
    let r = ResidualReport::from_moments(norm_sqr, overlap);
    r.factor_infidelity + (r.norm_deviation.powi(2) + temperature * temperature).sqrt()
        - temperature
}

/// `T * ln(sum exp(r / T))`, shifted by the maximum for stability.
fn soft_max(values: &[f64], temperature: f64) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let s: f64 = values.iter().map(|v| ((v - max) / temperature).exp()).sum();
    max + temperature * s.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config(ancilla_dim: usize) -> SearchConfig {
        SearchConfig {
            register_dim: 2,
            ancilla_dim,
            restarts: 3,
            budget: 60,
            seed: 5,
        }
    }

    #[test]
    fn builtin_registry_parses() {
        let reg = ProbeSetRegistry::builtin();
        let std = reg.get("standard-v1").unwrap();
        assert_eq!(std.probes().len(), 9 + 25);
        assert_eq!(std.register_dim(), 2);
        assert_eq!(reg.get("epsilon-only-v1").unwrap().probes().len(), 9);
        assert!(reg.get("nope").is_err());
    }

    #[test]
    fn soft_max_bounds() {
        let v = [0.1, 0.5, 0.3];
        let s = soft_max(&v, 1e-3);
        assert!(s >= 0.5 && s < 0.5 + 1e-3 * 3f64.ln() + 1e-12);
    }

    #[test]
    fn fast_gradient_matches_full_difference() {
        let set = ProbeSetRegistry::standard();
        let problem = Problem::new(&set, 2, 2);
        let x = problem.initial_point(&mut seeded(4));
        let t = 0.05;
        let (_, grad) = problem
            .objective_and_gradient(&x, t, &mut Vec::new())
            .unwrap();
        let mut y = x.clone();
        for k in [0, 7, 33, 101, 127] {
            let orig = y[k];
            y[k] = orig + FD_STEP;
            let plus = problem.smoothed(&y, t);
            y[k] = orig - FD_STEP;
            let minus = problem.smoothed(&y, t);
            y[k] = orig;
            let full = (plus - minus) / (2.0 * FD_STEP);
            assert!(
                (full - grad[k]).abs() < 1e-6,
                "param {k}: {full} vs {}",
                grad[k]
            );
        }
    }

    #[test]
    fn cached_evaluation_matches_public_residual() {
        let set = ProbeSetRegistry::standard();
        let problem = Problem::new(&set, 2, 2);
        let x = problem.initial_point(&mut seeded(9));
        let cand = problem.candidate(&x).unwrap();
        let totals = Problem::totals(&problem.evaluate(&x).unwrap());
        for (p, t) in set.probes().iter().zip(totals) {
            let r = residual(&cand, &p.a, &p.b, p.conjugate_first).unwrap();
            assert!((r.total - t).abs() < 1e-12);
        }
    }

    #[test]
    fn single_probe_is_matchable() {
        let z = QuantumState::basis(1, 0).unwrap();
        let set = ProbeSet::new(
            "origin",
            vec![Probe {
                label: "|0>|0>".into(),
                a: z.clone(),
                b: z,
                conjugate_first: false,
            }],
        )
        .unwrap();
        let out = search_best_candidate(&tiny_config(1), &set).unwrap();
        assert!(
            out.worst_case_residual < 1e-6,
            "{}",
            out.worst_case_residual
        );
    }

    #[test]
    fn deterministic_per_seed() {
        let set = ProbeSetRegistry::standard();
        let a = search_best_candidate(&tiny_config(1), &set).unwrap();
        let b = search_best_candidate(&tiny_config(1), &set).unwrap();
        assert_eq!(a, b);
        let c = search_best_candidate(
            &SearchConfig {
                seed: 6,
                ..tiny_config(1)
            },
            &set,
        )
        .unwrap();
        assert_ne!(a.restart_residuals, c.restart_residuals);
    }

    #[test]
    fn standard_set_stays_positive() {
        let set = ProbeSetRegistry::standard();
        let out = search_best_candidate(&tiny_config(2), &set).unwrap();
        assert!(out.worst_case_residual > 0.0);
        assert_eq!(out.candidate.ancilla_dim(), 2);
        let best = out
            .restart_residuals
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert!((best - out.worst_case_residual).abs() < 1e-12);
    }

    #[test]
    fn invalid_configs() {
        let set = ProbeSetRegistry::standard();
        for cfg in [
            SearchConfig {
                register_dim: 3,
                ..tiny_config(1)
            },
            SearchConfig {
                register_dim: 4,
                ..tiny_config(1)
            },
            SearchConfig {
                ancilla_dim: 3,
                ..tiny_config(1)
            },
            SearchConfig {
                restarts: 0,
                ..tiny_config(1)
            },
            SearchConfig {
                budget: 0,
                ..tiny_config(1)
            },
        ] {
            assert!(matches!(
                search_best_candidate(&cfg, &set),
                Err(Error::InvalidInput(_))
            ));
        }
        assert!(ProbeSet::new("empty", vec![]).is_err());
    }
}
