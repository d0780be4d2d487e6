use serde::{Deserialize, Serialize};

use crate::causal::{classify, CausalClass};
use crate::indefinite::{action, all_chains, constraint_value, critical_mu, FermionicProjector};
use crate::tolerances::Tolerances;
use crate::Result;

/// One grid point of a parameter sweep through a projector family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeRow {
    pub parameter: f64,
    /// Critical action S_{1/2n}.
    pub action: Option<f64>,
    pub constraint: Option<f64>,
    /// Roots of the chain A_01 as (re, im) pairs, sorted by (Re, Im).
    pub roots: Vec<[f64; 2]>,
    pub class: Option<CausalClass>,
    /// Set when the family could not be evaluated at this parameter.
    pub error: Option<String>,
}

pub fn landscape_scan<F>(family: F, grid: &[f64], tol: &Tolerances) -> Vec<LandscapeRow>
where
    F: Fn(f64) -> Result<FermionicProjector>,
{
    grid.iter()
        .map(|&t| {
            let eval = || -> Result<LandscapeRow> {
                let p = family(t)?;
                let mu = critical_mu(p.space().n());
                let chains = all_chains(&p)?;
                let m = p.space().m();
                let probe = if m > 1 { &chains[1] } else { &chains[0] };
                Ok(LandscapeRow {
                    parameter: t,
                    action: Some(action(&p, mu)?),
                    constraint: Some(constraint_value(&p)?),
                    roots: probe.roots.iter().map(|z| [z.re, z.im]).collect(),
                    class: Some(classify(probe, tol).class),
                    error: None,
                })
            };
            eval().unwrap_or_else(|e| LandscapeRow {
                parameter: t,
                action: None,
                constraint: None,
                roots: Vec::new(),
                class: None,
                error: Some(e.to_string()),
            })
        })
        .collect()
}
