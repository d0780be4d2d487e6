//! Minimization of the auxiliary action and of the constrained variational
//! principle over projectors, by multi-start descent on the unitary orbit.

mod config;
mod descent;
mod landscape;
mod multiplier;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::indefinite::{random_projector, DiscreteSpacetime, FermionicProjector};
use crate::{Error, Result};

pub use config::{Mode, PenaltySchedule, SolverConfig};
pub use descent::{evaluate_point, gradient_check, step, Objective, Point, RunStatus, TracePoint};
pub use landscape::{landscape_scan, LandscapeRow};
pub use multiplier::{lagrange_multiplier_estimate, MultiplierEstimate, MultiplierVerdict};

/// Outcome of one seed.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub status: RunStatus,
    pub projector: FermionicProjector,
    /// S_μ in auxiliary mode, Σ|A_xy²| in constrained mode.
    pub action: f64,
    pub constraint: f64,
    pub mu_eff: f64,
    pub el_residual: f64,
    pub iterations: usize,
    pub gradient_check: Option<f64>,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub status: RunStatus,
    pub action: f64,
    pub constraint: f64,
    pub el_residual: f64,
    pub iterations: usize,
    pub gradient_check: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub best: FermionicProjector,
    pub best_seed: u64,
    pub status: RunStatus,
    pub action: f64,
    pub constraint: f64,
    /// Multiplier from the final penalty state (auxiliary mode: μ itself).
    pub mu_eff: f64,
    pub multiplier: Option<MultiplierEstimate>,
    pub el_residual: f64,
    pub runs: Vec<SeedRun>,
    pub wall_time_s: f64,
}

impl SeedRun {
    pub fn summary(&self) -> SeedSummary {
        SeedSummary {
            seed: self.seed,
            status: self.status,
            action: self.action,
            constraint: self.constraint,
            el_residual: self.el_residual,
            iterations: self.iterations,
            gradient_check: self.gradient_check,
        }
    }
}

/// Smallest attainable Σ|A_xy|²: Σ_{x,y} Tr A_xy = Tr P = f and
/// |A_xy| ≥ |Tr A_xy| give T ≥ (Σ|A_xy|)²/m² ≥ f²/m².
pub fn kappa_lower_bound(space: &DiscreteSpacetime, f: usize) -> f64 {
    let m = space.m() as f64;
    (f * f) as f64 / (m * m)
}

fn run_seed(space: DiscreteSpacetime, f: usize, cfg: &SolverConfig, seed: u64) -> Result<SeedRun> {
    let p0 = random_projector(space, f, seed)?;
    let mut trace = Vec::new();
    let mut iterations = 0;
    match cfg.mode {
        Mode::Auxiliary { mu } => {
            let obj = Objective::Auxiliary { mu };
            let start = evaluate_point(p0, &obj, cfg)?;
            let check = if cfg.gradient_check { Some(descent::check_gradient(&start, &obj, cfg, seed)?) } else { None };
            let out = descent::descend(start, &obj, cfg, 0, &mut trace)?;
            iterations += out.iterations;
            let pt = out.point;
            Ok(SeedRun {
                seed,
                status: out.status,
                action: pt.value,
                constraint: pt.constraint,
                mu_eff: mu,
                el_residual: pt.el_residual,
                projector: pt.projector,
                iterations,
                gradient_check: check,
                trace,
            })
        }
        Mode::Constrained { kappa, penalty } => {
            let mut lambda = 0.0;
            let mut weight = penalty.initial;
            let mut obj = Objective::Penalty { kappa, lambda, weight };
            let mut pt = evaluate_point(p0, &obj, cfg)?;
            let check = if cfg.gradient_check { Some(descent::check_gradient(&pt, &obj, cfg, seed)?) } else { None };
            let mut status = RunStatus::MaxIterations;
            let total_stages = penalty.stages + penalty.max_refine_passes;
            for stage in 0..total_stages {
                if stage >= penalty.stages {
                    if (pt.constraint - kappa).abs() <= penalty.refine_threshold {
                        break;
                    }
                    lambda += weight * (pt.constraint - kappa);
                } else if stage > 0 {
                    weight *= penalty.growth;
                }
                obj = Objective::Penalty { kappa, lambda, weight };
                let start = evaluate_point(pt.projector, &obj, cfg)?;
                let out = descent::descend(start, &obj, cfg, stage, &mut trace)?;
                iterations += out.iterations;
                status = out.status;
                pt = out.point;
                if status == RunStatus::Diverged {
                    break;
                }
            }
            Ok(SeedRun {
                seed,
                status,
                action: pt.spectral_sq,
                constraint: pt.constraint,
                mu_eff: pt.mu_eff,
                el_residual: pt.el_residual,
                projector: pt.projector,
                iterations,
                gradient_check: check,
                trace,
            })
        }
    }
}

/// Multi-start minimization. Seeds run in parallel with independent
/// streams; the best run is the lowest action, ties broken by seed order.
/// In constrained mode runs violating the constraint by more than the
/// refinement threshold rank after all feasible runs.
pub fn minimize(space: DiscreteSpacetime, f: usize, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    if f > space.max_rank() {
        return Err(Error::InfeasibleRank { f, max: space.max_rank() });
    }
    if let Mode::Constrained { kappa, .. } = cfg.mode {
        let lo = kappa_lower_bound(&space, f);
        if kappa < lo {
            return Err(Error::InfeasibleKappa { kappa, reason: format!("Σ|A_xy|² ≥ f²/m² = {lo}") });
        }
    }
    let started = Instant::now();
    let runs: Vec<SeedRun> = cfg
        .seeds
        .par_iter()
        .map(|&seed| run_seed(space, f, cfg, seed))
        .collect::<Result<Vec<_>>>()?;
    if let Some(d) = runs.iter().find(|r| r.status == RunStatus::Diverged) {
        return Err(Error::DivergenceDetected { action: d.action, iteration: d.iterations });
    }
    let threshold = match cfg.mode {
        Mode::Constrained { penalty, .. } => penalty.refine_threshold,
        Mode::Auxiliary { .. } => f64::INFINITY,
    };
    let infeasible = |r: &SeedRun| match cfg.mode {
        Mode::Constrained { kappa, .. } => (r.constraint - kappa).abs() > threshold,
        Mode::Auxiliary { .. } => false,
    };
    let best_idx = (0..runs.len())
        .min_by(|&a, &b| {
            infeasible(&runs[a])
                .cmp(&infeasible(&runs[b]))
                .then(runs[a].action.total_cmp(&runs[b].action))
                .then(a.cmp(&b))
        })
        .expect("seed list is non-empty");
    let best = &runs[best_idx];
    let multiplier = lagrange_multiplier_estimate(&best.projector, &cfg.tolerances, 32, best.seed).ok();
    Ok(SolverResult {
        best: best.projector.clone(),
        best_seed: best.seed,
        status: best.status,
        action: best.action,
        constraint: best.constraint,
        mu_eff: best.mu_eff,
        multiplier,
        el_residual: best.el_residual,
        wall_time_s: started.elapsed().as_secs_f64(),
        runs,
    })
}
