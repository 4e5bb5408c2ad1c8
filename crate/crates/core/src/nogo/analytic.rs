//! The scalar contradiction on the normalization polynomial
//! `f(eps) = MN C2^2 + eps^2 MN (C1^2 - C2^2) + 2 eps sqrt(1 - eps^2) MN C1 C2`,
//! which must equal 1 for every `eps` if a linear candidate existed.
//! `f(0) = 1` forces `C2^2 = 1/(MN)`, `f(1) = 1` forces `C1^2 = C2^2`, and
//! then `f(1/2) = 1 +- sqrt(3)/2`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Points at which the normalization constraint is evaluated.
pub const CHECK_EPSILONS: [f64; 3] = [0.0, 0.5, 1.0];

/// Tolerance for deciding that `f(eps) = 1` holds.
const CONSTRAINT_TOL: f64 = 1e-12;

pub fn normalization_expression(c1: f64, c2: f64, m: usize, n: usize, eps: f64) -> f64 {
    let mn = (m * n) as f64;
    mn * c2 * c2
        + eps * eps * mn * (c1 * c1 - c2 * c2)
        + 2.0 * eps * (1.0 - eps * eps).sqrt() * mn * c1 * c2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonValue {
    pub epsilon: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticReport {
    pub c1: f64,
    pub c2: f64,
    pub m: usize,
    pub n: usize,
    /// `f(eps)` for each entry of [`CHECK_EPSILONS`].
    pub lhs_values: Vec<EpsilonValue>,
    /// First checked `eps` with `f(eps) != 1`, if any.
    pub violated_at: Option<f64>,
    pub contradiction: bool,
}

impl AnalyticReport {
    pub fn value_at(&self, epsilon: f64) -> Option<f64> {
        self.lhs_values
            .iter()
            .find(|v| v.epsilon == epsilon)
            .map(|v| v.value)
    }

    /// `f(1/2) - 1`; `+-sqrt(3)/2` on the constraint surface.
    pub fn half_deviation(&self) -> f64 {
        self.value_at(0.5).expect("0.5 is always checked") - 1.0
    }

    /// Whether `(C1, C2)` satisfies `f(0) = f(1) = 1`.
    pub fn on_constraint_surface(&self) -> bool {
        [0.0, 1.0]
            .iter()
            .all(|&e| (self.value_at(e).expect("checked") - 1.0).abs() <= CONSTRAINT_TOL)
    }
}

/// Evaluates `f` at `eps = 0, 1/2, 1` and reports whether the three
/// constraints `f(eps) = 1` fail for `(C1, C2)`.
pub fn normalization_contradiction_check(
    c1: f64,
    c2: f64,
    m: usize,
    n: usize,
) -> Result<AnalyticReport> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("M and N must be at least 1"));
    }
    if !c1.is_finite() || !c2.is_finite() {
        return Err(Error::invalid("C1 and C2 must be finite"));
    }
    let lhs_values: Vec<EpsilonValue> = CHECK_EPSILONS
        .iter()
        .map(|&epsilon| EpsilonValue {
            epsilon,
            value: normalization_expression(c1, c2, m, n, epsilon),
        })
        .collect();
    let violated_at = lhs_values
        .iter()
        .find(|v| (v.value - 1.0).abs() > CONSTRAINT_TOL)
        .map(|v| v.epsilon);
    Ok(AnalyticReport {
        c1,
        c2,
        m,
        n,
        lhs_values,
        violated_at,
        contradiction: violated_at.is_some(),
    })
}
