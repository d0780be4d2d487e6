//! Dirac sea configurations, the extended action and the state-stability
//! predicate on sampled Lorentz-invariant functions a(q²), b(q²).

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSea")]
pub struct SeaConfig {
    /// Distinct positive masses, ascending.
    pub masses: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSea {
    masses: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<RawSea> for SeaConfig {
    type Error = Error;
    fn try_from(r: RawSea) -> Result<Self> {
        SeaConfig::new(r.masses, r.weights)
    }
}

impl SeaConfig {
    pub fn new(masses: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if masses.is_empty() || masses.len() != weights.len() {
            return Err(Error::InvalidInput("need one weight per mass and at least one sea".into()));
        }
        if masses.iter().chain(&weights).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInput("masses and weights must be positive".into()));
        }
        if masses.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("masses must be distinct and ascending".into()));
        }
        Ok(Self { masses, weights })
    }

    pub fn generations(&self) -> usize {
        self.masses.len()
    }
}

/// Σ m_β ρ_β³.
pub fn mass_constraint(seas: &SeaConfig) -> f64 {
    seas.masses.iter().zip(&seas.weights).map(|(m, r)| m * r * r * r).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RegularizationFreedom {
    pub c: [f64; 5],
}

/// S + F(𝔪₃, 𝔪₅) + c₃ Σρ m⁴ + c₄ Σρ m⁵.
pub fn extended_action(s: f64, f_value: f64, freedom: &RegularizationFreedom, seas: &SeaConfig) -> f64 {
    let moment = |k: i32| seas.masses.iter().zip(&seas.weights).map(|(m, r)| r * m.powi(k)).sum::<f64>();
    s + f_value + freedom.c[3] * moment(4) + freedom.c[4] * moment(5)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateStabilityFunctions {
    pub qsq: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl StateStabilityFunctions {
    pub fn new(qsq: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if qsq.is_empty() || qsq.len() != a.len() || qsq.len() != b.len() {
            return Err(Error::Dimension("qsq, a and b must have equal nonzero length".into()));
        }
        if qsq[0] <= 0.0 || qsq.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("q² grid must be positive and strictly increasing".into()));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("a and b must be finite".into()));
        }
        Ok(Self { qsq, a, b })
    }

    pub fn sample<F: Fn(f64) -> (f64, f64)>(qsq: Vec<f64>, f: F) -> Result<Self> {
        let (a, b) = qsq.iter().map(|&q| f(q)).unzip();
        Self::new(qsq, a, b)
    }

    /// Linear interpolation of a + b.
    fn sum_at(&self, x: f64) -> Option<f64> {
        let q = &self.qsq;
        if x < q[0] || x > q[q.len() - 1] {
            return None;
        }
        let i = q.partition_point(|&v| v < x);
        if i < q.len() && q[i] == x {
            return Some(self.a[i] + self.b[i]);
        }
        let (lo, hi) = (i - 1, i);
        let t = (x - q[lo]) / (q[hi] - q[lo]);
        Some((1.0 - t) * (self.a[lo] + self.b[lo]) + t * (self.a[hi] + self.b[hi]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellCheck {
    pub mass: f64,
    pub value: f64,
    pub excess: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub min_a: f64,
    pub infimum: f64,
    /// Grid values q² where a < −tol.
    pub negative_a: Vec<f64>,
    pub shells: Vec<ShellCheck>,
    /// Grid values q² where a + b lies below the smallest shell value by
    /// more than tol.
    pub below_shells: Vec<f64>,
}

/// Stable iff a ≥ −tol on the grid and a + b at every occupied shell m_α²
/// is within tol of its infimum over the grid.
pub fn state_stability_check(fns: &StateStabilityFunctions, seas: &SeaConfig, tol: f64) -> Result<StabilityVerdict> {
    let (lo, hi) = (fns.qsq[0], fns.qsq[fns.qsq.len() - 1]);
    let sums: Vec<f64> = fns.a.iter().zip(&fns.b).map(|(a, b)| a + b).collect();
    let infimum = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let mut shells = Vec::new();
    for &m in &seas.masses {
        let msq = m * m;
        let value = fns.sum_at(msq).ok_or(Error::GridCoverage { msq, lo, hi })?;
        let excess = value - infimum;
        shells.push(ShellCheck { mass: m, value, excess, ok: excess <= tol });
    }
    let negative_a: Vec<f64> = fns.qsq.iter().zip(&fns.a).filter(|(_, a)| **a < -tol).map(|(q, _)| *q).collect();
    let min_shell = shells.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    let below_shells = fns.qsq.iter().zip(&sums).filter(|(_, s)| **s < min_shell - tol).map(|(q, _)| *q).collect();
    let min_a = fns.a.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(StabilityVerdict {
        stable: negative_a.is_empty() && shells.iter().all(|s| s.ok),
        min_a,
        infimum,
        negative_a,
        shells,
        below_shells,
    })
}
