//! Static and isotropic lattice model: a vector-scalar Dirac sea ansatz on
//! a (t, r) lattice of spacing 2π, reduced by the angular average of plane
//! waves.
//!
//! For a plane wave of radial momentum k the angular average over the
//! sphere of radius r gives the scalar kernel K₀(x) = sin x / x and, for the
//! radial component of the vector, K₁(x) = i (sin x / x² − cos x / x), with
//! x = k r. Normalization constants are absorbed into φ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuum::gamma_matrices;
use crate::indefinite::lagrangian;
use crate::linalg::{eigenvalues, CMat, C64};
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry")]
pub struct LatticeGeometry {
    nt: usize,
    nr: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    nt: usize,
    nr: usize,
}

impl TryFrom<RawGeometry> for LatticeGeometry {
    type Error = Error;
    fn try_from(r: RawGeometry) -> Result<Self> {
        LatticeGeometry::new(r.nt, r.nr)
    }
}

impl LatticeGeometry {
    pub fn new(nt: usize, nr: usize) -> Result<Self> {
        if nt == 0 || nr == 0 {
            return Err(Error::InvalidInput("lattice sizes must be positive".into()));
        }
        Ok(Self { nt, nr })
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    /// Position t = 2π i.
    pub fn time(&self, i: usize) -> f64 {
        TWO_PI * i as f64
    }

    /// Position r = 2π j.
    pub fn radius(&self, j: usize) -> f64 {
        TWO_PI * j as f64
    }

    /// Dual lattice: ω ∈ {−(N_t−1), …, 0}, k ∈ {1, …, N_r}.
    pub fn contains_dual(&self, omega: i64, k: i64) -> bool {
        (-(self.nt as i64 - 1)..=0).contains(&omega) && (1..=self.nr as i64).contains(&k)
    }

    pub fn dual_points(&self) -> Vec<(i64, i64)> {
        let mut v = Vec::with_capacity(self.nt * self.nr);
        for w in -(self.nt as i64 - 1)..=0 {
            for k in 1..=self.nr as i64 {
                v.push((w, k));
            }
        }
        v
    }
}

/// Physical momenta of dual-lattice labels: ω_phys = ω·time_scale,
/// k_phys = k·radial_scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumUnits {
    pub time_scale: f64,
    pub radial_scale: f64,
}

impl MomentumUnits {
    /// 1/N_t in time (the dual of N_t points of spacing 2π) and 1/(2N_r) in
    /// the radial direction (the radial line is half of a periodic box).
    pub fn standard(geom: &LatticeGeometry) -> Self {
        Self { time_scale: 1.0 / geom.nt as f64, radial_scale: 1.0 / (2.0 * geom.nr as f64) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupiedState {
    pub omega: i64,
    pub k: i64,
    pub phi: f64,
    pub tau: f64,
}

impl OccupiedState {
    pub fn new(omega: i64, k: i64, phi: f64, tau: f64) -> Self {
        Self { omega, k, phi, tau }
    }

    /// v = φ (cosh τ, sinh τ) in the (time, radial) plane.
    pub fn vector(&self) -> [f64; 2] {
        [self.phi * self.tau.cosh(), self.phi * self.tau.sinh()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeOccupation {
    pub states: Vec<OccupiedState>,
}

impl LatticeOccupation {
    pub fn validate(&self, geom: &LatticeGeometry) -> Result<()> {
        for s in &self.states {
            if !geom.contains_dual(s.omega, s.k) {
                return Err(Error::InvalidInput(format!("occupied point (ω={}, k={}) is outside the dual lattice", s.omega, s.k)));
            }
            if !(s.phi > 0.0 && s.phi.is_finite() && s.tau.is_finite()) {
                return Err(Error::InvalidInput(format!("invalid amplitude or boost at (ω={}, k={})", s.omega, s.k)));
            }
        }
        Ok(())
    }
}

/// Per-state weight in the trace functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceWeighting {
    #[default]
    Equal,
    /// Weight k², the number of states on the momentum shell.
    ShellDegeneracy,
}

impl TraceWeighting {
    fn weight(&self, s: &OccupiedState) -> f64 {
        match self {
            TraceWeighting::Equal => 1.0,
            TraceWeighting::ShellDegeneracy => (s.k * s.k) as f64,
        }
    }
}

/// Σ φ over occupied states.
pub fn trace_condition(occ: &LatticeOccupation) -> f64 {
    trace_condition_weighted(occ, TraceWeighting::Equal)
}

pub fn trace_condition_weighted(occ: &LatticeOccupation, w: TraceWeighting) -> f64 {
    occ.states.iter().map(|s| w.weight(s) * s.phi).sum()
}

/// Rescales all φ by a common factor so that the trace equals `target`.
pub fn enforce_trace(occ: &LatticeOccupation, target: f64) -> Result<LatticeOccupation> {
    enforce_trace_weighted(occ, target, TraceWeighting::Equal)
}

pub fn enforce_trace_weighted(occ: &LatticeOccupation, target: f64, w: TraceWeighting) -> Result<LatticeOccupation> {
    let t = trace_condition_weighted(occ, w);
    if t == 0.0 || !(target > 0.0) {
        return Err(Error::InvalidInput(format!("cannot rescale trace {t} to {target}")));
    }
    let f = target / t;
    Ok(LatticeOccupation { states: occ.states.iter().map(|s| OccupiedState { phi: s.phi * f, ..*s }).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPreset {
    /// ρ_t = 1 at t = 0 and 2 otherwise; ρ_r = (r/2π)², 1/12 at r = 0.
    Sphere,
    /// As `Sphere` without the doubling of t > 0.
    SphereSingleTime,
}

impl WeightPreset {
    pub const ALL: [WeightPreset; 2] = [WeightPreset::Sphere, WeightPreset::SphereSingleTime];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub time: Vec<f64>,
    pub radial: Vec<f64>,
}

impl Weights {
    pub fn preset(p: WeightPreset, geom: &LatticeGeometry) -> Self {
        let doubling = if p == WeightPreset::Sphere { 2.0 } else { 1.0 };
        let time = (0..geom.nt).map(|i| if i == 0 { 1.0 } else { doubling }).collect();
        let radial = (0..geom.nr).map(|j| if j == 0 { 1.0 / 12.0 } else { (j * j) as f64 }).collect();
        Self { time, radial }
    }

    pub fn validate(&self, geom: &LatticeGeometry) -> Result<()> {
        if self.time.len() != geom.nt || self.radial.len() != geom.nr {
            return Err(Error::Dimension(format!(
                "weights have {}×{} entries for a {}×{} lattice",
                self.time.len(),
                self.radial.len(),
                geom.nt,
                geom.nr
            )));
        }
        if self.time.iter().chain(&self.radial).any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        Ok(())
    }
}

/// (K₀(x), K₁(x)/i), both real.
pub fn angular_kernels(x: f64) -> (f64, f64) {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        (1.0 - x2 / 6.0 + x2 * x2 / 120.0, x / 3.0 - x * x2 / 30.0)
    } else {
        let (s, c) = x.sin_cos();
        (s / x, s / (x * x) - c / x)
    }
}

/// P(t, r) for every lattice point, indexed `[i * N_r + j]`.
pub fn lattice_kernel(geom: &LatticeGeometry, units: &MomentumUnits, occ: &LatticeOccupation) -> Result<Vec<CMat>> {
    occ.validate(geom)?;
    let g = gamma_matrices();
    let (g0, g3) = (&g[0], &g[3]);
    let id = CMat::identity(4, 4);
    let mut out = vec![CMat::zeros(4, 4); geom.nt * geom.nr];
    for s in &occ.states {
        let [v0, vr] = s.vector();
        let w = s.omega as f64 * units.time_scale;
        let k = s.k as f64 * units.radial_scale;
        for j in 0..geom.nr {
            let (k0, k1) = angular_kernels(k * geom.radius(j));
            let block = g0 * C64::new(v0 * k0, 0.0) + g3 * C64::new(0.0, vr * k1) + &id * C64::new(s.phi * k0, 0.0);
            for i in 0..geom.nt {
                let phase = C64::from_polar(1.0, -w * geom.time(i));
                out[i * geom.nr + j] += &block * phase;
            }
        }
    }
    Ok(out)
}

/// γ⁰ P† γ⁰.
pub fn dirac_adjoint(p: &CMat) -> CMat {
    let g0 = &gamma_matrices()[0];
    g0 * p.adjoint() * g0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeAction {
    /// Critical Lagrangian (μ = 1/4) per point, indexed `[i * N_r + j]`.
    pub lagrangian: Vec<f64>,
    pub total: f64,
}

pub fn lattice_action(
    geom: &LatticeGeometry,
    units: &MomentumUnits,
    occ: &LatticeOccupation,
    weights: &Weights,
) -> Result<LatticeAction> {
    weights.validate(geom)?;
    let kernel = lattice_kernel(geom, units, occ)?;
    let mut lag = Vec::with_capacity(kernel.len());
    let mut total = 0.0;
    for i in 0..geom.nt {
        for j in 0..geom.nr {
            let p = &kernel[i * geom.nr + j];
            let a = p * dirac_adjoint(p);
            let roots = eigenvalues(&a)
                .map_err(|e| Error::EigenFailure(format!("lattice point (t={i}, r={j}): {e}")))?;
            let l = lagrangian(&roots, 0.25);
            total += weights.time[i] * weights.radial[j] * l;
            lag.push(l);
        }
    }
    Ok(LatticeAction { lagrangian: lag, total })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMinimum {
    pub tau1: f64,
    pub tau2: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeSurface {
    pub taus: Vec<f64>,
    /// S(τ₁ = taus[a], τ₂ = taus[b]) at `[a * len + b]`.
    pub values: Vec<f64>,
    /// Interior grid cells not larger than any of their 8 neighbours,
    /// ascending by value.
    pub minima: Vec<LocalMinimum>,
}

impl LandscapeSurface {
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.taus.len() + b]
    }

    pub fn value_at(&self, tau1: f64, tau2: f64) -> Option<f64> {
        let find = |t: f64| self.taus.iter().position(|&x| (x - t).abs() < 1e-12);
        Some(self.value(find(tau1)?, find(tau2)?))
    }

    pub fn global_minima(&self, rel_tol: f64) -> Vec<LocalMinimum> {
        let Some(best) = self.minima.first() else { return Vec::new() };
        self.minima.iter().copied().filter(|m| m.value <= best.value + rel_tol * best.value.abs()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau1,tau2,S\n");
        for (a, t1) in self.taus.iter().enumerate() {
            for (b, t2) in self.taus.iter().enumerate() {
                s.push_str(&format!("{t1},{t2},{}\n", self.value(a, b)));
            }
        }
        s
    }
}

/// S(τ₁, τ₂) with the boosts of the two occupied states set from the grid;
/// φ is taken from `occ`.
pub fn landscape_scan_2d(
    geom: &LatticeGeometry,
    units: &MomentumUnits,
    occ: &LatticeOccupation,
    weights: &Weights,
    taus: &[f64],
) -> Result<LandscapeSurface> {
    if occ.states.len() != 2 {
        return Err(Error::InvalidInput(format!("the 2D scan needs two occupied states, got {}", occ.states.len())));
    }
    occ.validate(geom)?;
    weights.validate(geom)?;
    let n = taus.len();
    let rows: Vec<Vec<f64>> = taus
        .par_iter()
        .map(|&t1| {
            taus.iter()
                .map(|&t2| {
                    let mut o = occ.clone();
                    o.states[0].tau = t1;
                    o.states[1].tau = t2;
                    lattice_action(geom, units, &o, weights).map(|a| a.total)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = rows.into_iter().flatten().collect();
    let mut minima = Vec::new();
    for a in 1..n.saturating_sub(1) {
        for b in 1..n - 1 {
            let v = values[a * n + b];
            let is_min = (a - 1..=a + 1).all(|x| (b - 1..=b + 1).all(|y| values[x * n + y] >= v));
            if is_min {
                minima.push(LocalMinimum { tau1: taus[a], tau2: taus[b], value: v });
            }
        }
    }
    minima.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.tau1.total_cmp(&y.tau1)).then(x.tau2.total_cmp(&y.tau2)));
    Ok(LandscapeSurface { taus: taus.to_vec(), values, minima })
}

/// The two-state configuration (ω=−1, k=1), (ω=−2, k=2) with φ = 1.
pub fn two_state_occupation() -> LatticeOccupation {
    LatticeOccupation { states: vec![OccupiedState::new(-1, 1, 1.0, 0.0), OccupiedState::new(-2, 2, 1.0, 0.0)] }
}

/// Uniform grid of `n` points on [lo, hi].
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
