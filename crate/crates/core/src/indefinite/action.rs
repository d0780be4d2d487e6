use super::chain::all_chains;
use super::projector::FermionicProjector;
use super::spectral::Functional;
use crate::Result;

/// Σ_{x,y} F[A_xy] for a per-chain functional F.
pub fn functional_value(p: &FermionicProjector, fun: Functional) -> Result<f64> {
    Ok(all_chains(p)?.iter().map(|c| fun.value(&c.roots)).sum())
}

/// S_μ = Σ_{x,y} L_μ[A_xy].
pub fn action(p: &FermionicProjector, mu: f64) -> Result<f64> {
    functional_value(p, Functional::lagrangian(mu))
}

/// T = Σ_{x,y} |A_xy|², the quantity held fixed by the constraint.
pub fn constraint_value(p: &FermionicProjector) -> Result<f64> {
    functional_value(p, Functional::constraint())
}

/// Σ_{x,y} |A_xy²|, the functional minimized in the constrained problem.
pub fn spectral_sq_total(p: &FermionicProjector) -> Result<f64> {
    functional_value(p, Functional { a: 1.0, b: 0.0 })
}
