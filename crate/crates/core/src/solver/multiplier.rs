use serde::{Deserialize, Serialize};

use crate::indefinite::{commutator, ChainData, FermionicProjector, Functional};
use crate::linalg::{trace_product, CMat, I};
use crate::rng::{hermitian_gaussian, rng_from_seed};
use crate::tolerances::Tolerances;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultiplierVerdict {
    Estimated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierEstimate {
    /// None when the fit is rank deficient.
    pub mu_hat: Option<f64>,
    /// ‖g − μ̂h‖ / ‖g‖ over the sampled directions.
    pub residual: Option<f64>,
    pub verdict: MultiplierVerdict,
    /// Set when the variation of T vanishes along every sampled direction.
    pub rank_deficient: bool,
}

/// ‖[P, Q_T]‖ relative to ‖P‖‖Q_T‖ below which T counts as stationary.
pub const RANK_TOLERANCE: f64 = 1e-7;

/// Residual above which a fit counts as inconclusive.
pub const FIT_RESIDUAL_LIMIT: f64 = 1e-3;

fn rate(p: &FermionicProjector, q: &crate::indefinite::QKernel, k: &CMat) -> f64 {
    let c = commutator(p, q);
    let b = p.space().signature_left(k);
    (I * 4.0 * trace_product(&c, &b)).re
}

/// Least-squares fit of the first variations g_k of Σ|A²| against those of
/// T = Σ|A|² along random generators: g ≈ μ̂ h. At a stationary point of the
/// constrained problem (or of S_μ) the fit is exact.
pub fn lagrange_multiplier_estimate(
    p: &FermionicProjector,
    tol: &Tolerances,
    samples: usize,
    seed: u64,
) -> Result<MultiplierEstimate> {
    let data = ChainData::new(p)?;
    let qs = data.q_kernel(Functional { a: 1.0, b: 0.0 }, tol)?;
    let qt = data.q_kernel(Functional::constraint(), tol)?;
    let pt = p.matrix();
    let ct = commutator(p, &qt);
    let rank_deficient = ct.norm() <= RANK_TOLERANCE * pt.norm() * qt.matrix().norm();
    let mut rng = rng_from_seed(seed ^ 0x5bd1_e995);
    let dim = p.space().dim();
    let (mut gh, mut hh, mut gg) = (0.0, 0.0, 0.0);
    let mut pairs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let k = hermitian_gaussian(&mut rng, dim);
        let g = rate(p, &qs, &k);
        let h = rate(p, &qt, &k);
        gh += g * h;
        hh += h * h;
        gg += g * g;
        pairs.push((g, h));
    }
    if rank_deficient || hh == 0.0 {
        return Ok(MultiplierEstimate {
            mu_hat: None,
            residual: None,
            verdict: MultiplierVerdict::Inconclusive,
            rank_deficient: true,
        });
    }
    let mu_hat = gh / hh;
    let res: f64 = pairs.iter().map(|(g, h)| (g - mu_hat * h).powi(2)).sum::<f64>().sqrt();
    let residual = res / gg.sqrt().max(1e-300);
    let verdict = if residual <= FIT_RESIDUAL_LIMIT { MultiplierVerdict::Estimated } else { MultiplierVerdict::Inconclusive };
    Ok(MultiplierEstimate { mu_hat: Some(mu_hat), residual: Some(residual), verdict, rank_deficient: false })
}
