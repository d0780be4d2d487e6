//! Numerical tolerances shared by all modules.
//!
//! Every threshold that decides a branch (fallback gradients, causal
//! classes, projector validation) lives here so that it can be overridden
//! from a single JSON document.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// A root with |λ| < degenerate_abs·(1 + ‖A‖) is treated as zero.
    pub degenerate_abs: f64,
    /// Two roots closer than collision_rel·(1 + ‖A‖) count as colliding.
    pub collision_rel: f64,
    /// Relative scale of the causal tolerances: τ = causal_rel·(1 + max|λ|).
    pub causal_rel: f64,
    /// Maximal deviation of the Gram matrix from −1 for a valid projector.
    pub projector: f64,
    /// Gram drift that triggers re-orthonormalization inside the solver.
    pub reorthonormalize: f64,
    /// Step of the central finite differences used by the gradient fallback.
    pub fd_step: f64,
    /// Action value below which a run is declared divergent.
    pub divergence_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            degenerate_abs: 1e-10,
            collision_rel: 1e-8,
            causal_rel: 1e-9,
            projector: 1e-9,
            reorthonormalize: 1e-10,
            fd_step: 1e-6,
            divergence_floor: -1e6,
        }
    }
}

impl Tolerances {
    /// Causal tolerance for a root multiset.
    pub fn causal(&self, roots: &[num_complex::Complex64]) -> f64 {
        let max = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        self.causal_rel * (1.0 + max)
    }

    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("degenerate_abs", self.degenerate_abs),
            ("collision_rel", self.collision_rel),
            ("causal_rel", self.causal_rel),
            ("projector", self.projector),
            ("reorthonormalize", self.reorthonormalize),
            ("fd_step", self.fd_step),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::Error::InvalidInput(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if !(self.divergence_floor < 0.0) {
            return Err(crate::Error::InvalidInput("divergence_floor must be negative".into()));
        }
        Ok(())
    }
}
