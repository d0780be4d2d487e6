//! One descent run on the unitary orbit P → e^{iηB} P e^{−iηB}.
//!
//! Generators are written B = S·K with K Hermitian. Along such a curve the
//! objective changes at rate Re Tr(G K) with G = 4i [P, Q] S, which is
//! Hermitian; −G is the steepest descent direction for the Frobenius metric
//! on K. Directions are combined by Polak–Ribière with restarts.

use serde::{Deserialize, Serialize};

use crate::indefinite::{commutator, ChainData, FermionicProjector, Functional};
use crate::linalg::{CMat, C64, I};
use crate::rng::{hermitian_gaussian, rng_from_seed};
use crate::{Error, Result};

use super::config::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Objective {
    Auxiliary { mu: f64 },
    /// Σ|A²| + λ(T − κ) + (w/2)(T − κ)².
    Penalty { kappa: f64, lambda: f64, weight: f64 },
}

#[derive(Debug, Clone)]
pub struct Point {
    pub projector: FermionicProjector,
    pub value: f64,
    /// Σ|A_xy²|
    pub spectral_sq: f64,
    /// Σ|A_xy|²
    pub constraint: f64,
    /// Effective multiplier: the gradient equals that of S_μ at this μ.
    pub mu_eff: f64,
    pub gradient: CMat,
    pub el_residual: f64,
}

pub fn evaluate_point(p: FermionicProjector, obj: &Objective, cfg: &SolverConfig) -> Result<Point> {
    let data = ChainData::new(&p)?;
    let s0 = data.total(Functional { a: 1.0, b: 0.0 });
    let t = data.total(Functional::constraint());
    let (value, mu_eff) = match *obj {
        Objective::Auxiliary { mu } => (s0 - mu * t, mu),
        Objective::Penalty { kappa, lambda, weight } => {
            let d = t - kappa;
            (s0 + lambda * d + 0.5 * weight * d * d, -(lambda + weight * d))
        }
    };
    let q = data.q_kernel(Functional::lagrangian(mu_eff), &cfg.tolerances)?;
    let c = commutator(&p, &q);
    let el_residual = c.norm();
    let gradient = p.space().signature_right(&c) * (I * 4.0);
    Ok(Point { projector: p, value, spectral_sq: s0, constraint: t, mu_eff, gradient, el_residual })
}

/// e^{iηSK} applied to the image basis.
pub fn step(p: &FermionicProjector, k: &CMat, eta: f64) -> FermionicProjector {
    let b = p.space().signature_left(k);
    let u = (b * C64::new(0.0, eta)).exp();
    p.transformed(&u)
}

fn inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunStatus {
    Converged,
    MaxIterations,
    Stalled,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub stage: usize,
    pub iteration: usize,
    pub objective: f64,
    pub el_residual: f64,
}

pub struct StageOutcome {
    pub point: Point,
    pub status: RunStatus,
    pub iterations: usize,
}

/// Relative error between the analytic rate Re Tr(G K) and a central
/// difference of the objective along a random generator.
pub fn gradient_check(point: &Point, obj: &Objective, cfg: &SolverConfig, seed: u64) -> Result<f64> {
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let dim = point.projector.space().dim();
    let k = hermitian_gaussian(&mut rng, dim);
    let analytic = inner(&point.gradient, &k);
    let h = 1e-5 / k.norm();
    let plus = evaluate_point(step(&point.projector, &k, h), obj, cfg)?.value;
    let minus = evaluate_point(step(&point.projector, &k, -h), obj, cfg)?.value;
    let fd = (plus - minus) / (2.0 * h);
    Ok((analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1e-12))
}

pub fn descend(
    start: Point,
    obj: &Objective,
    cfg: &SolverConfig,
    stage: usize,
    trace: &mut Vec<TracePoint>,
) -> Result<StageOutcome> {
    let mut x = start;
    let mut prev_grad: Option<CMat> = None;
    let mut dir: Option<CMat> = None;
    let mut step_len = cfg.initial_step;
    let mut slow = 0usize;
    trace.push(TracePoint { stage, iteration: 0, objective: x.value, el_residual: x.el_residual });
    for it in 1..=cfg.max_iterations {
        if x.el_residual <= cfg.el_tolerance {
            return Ok(StageOutcome { point: x, status: RunStatus::Converged, iterations: it - 1 });
        }
        let g = &x.gradient;
        let mut k = -g.clone();
        if let (Some(pg), Some(pd)) = (&prev_grad, &dir) {
            let denom = inner(pg, pg);
            let beta = if denom > 0.0 { (inner(g, &(g - pg)) / denom).max(0.0) } else { 0.0 };
            let cand = &k + pd * C64::new(beta, 0.0);
            if inner(g, &cand) < 0.0 {
                k = cand;
            }
        }
        let mut accepted = None;
        for attempt in 0..2 {
            let slope = inner(g, &k);
            let knorm = k.norm();
            if !(slope < 0.0) || knorm == 0.0 {
                break;
            }
            let mut len = (2.0 * step_len).min(cfg.max_step);
            for _ in 0..cfg.max_backtracks {
                let eta = len / knorm;
                let mut cand = step(&x.projector, &k, eta);
                if cand.gram_deviation() > cfg.tolerances.reorthonormalize {
                    cand = cand.reorthonormalized()?;
                }
                let trial = evaluate_point(cand, obj, cfg)?;
                if trial.value <= x.value + cfg.armijo * eta * slope {
                    accepted = Some((trial, len));
                    break;
                }
                len *= cfg.backtrack;
            }
            if accepted.is_some() || attempt == 1 {
                break;
            }
            k = -g.clone();
        }
        let Some((next, len)) = accepted else {
            return Ok(StageOutcome { point: x, status: RunStatus::Stalled, iterations: it - 1 });
        };
        step_len = len;
        let decrease = x.value - next.value;
        if decrease <= cfg.stall_decrease * (1.0 + x.value.abs()) {
            slow += 1;
        } else {
            slow = 0;
        }
        prev_grad = Some(x.gradient.clone());
        dir = Some(k);
        x = next;
        trace.push(TracePoint { stage, iteration: it, objective: x.value, el_residual: x.el_residual });
        if x.value < cfg.tolerances.divergence_floor {
            return Ok(StageOutcome { point: x, status: RunStatus::Diverged, iterations: it });
        }
        if slow >= cfg.stall_iterations {
            return Ok(StageOutcome { point: x, status: RunStatus::Stalled, iterations: it });
        }
    }
    let status = if x.el_residual <= cfg.el_tolerance { RunStatus::Converged } else { RunStatus::MaxIterations };
    Ok(StageOutcome { point: x, status, iterations: cfg.max_iterations })
}

pub(crate) fn check_gradient(point: &Point, obj: &Objective, cfg: &SolverConfig, seed: u64) -> Result<f64> {
    let rel = gradient_check(point, obj, cfg, seed)?;
    if rel > 1e-4 {
        return Err(Error::GradientInconsistent { rel });
    }
    Ok(rel)
}
