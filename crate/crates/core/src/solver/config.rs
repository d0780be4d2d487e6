use serde::{Deserialize, Serialize};

use crate::tolerances::Tolerances;
use crate::{Error, Result};

/// Which variational problem is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Mode {
    /// Unconstrained auxiliary action S_μ = Σ L_μ[A_xy].
    Auxiliary { mu: f64 },
    /// Minimize Σ|A_xy²| subject to Σ|A_xy|² = κ.
    Constrained {
        kappa: f64,
        #[serde(default)]
        penalty: PenaltySchedule,
    },
}

/// Quadratic penalty weights w_k = initial·growth^k for `stages` stages,
/// followed by augmented-Lagrangian passes while |T − κ| > `refine_threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PenaltySchedule {
    pub initial: f64,
    pub growth: f64,
    pub stages: usize,
    pub refine_threshold: f64,
    pub max_refine_passes: usize,
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        Self { initial: 10.0, growth: 10.0, stages: 3, refine_threshold: 1e-6, max_refine_passes: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub mode: Mode,
    pub seeds: Vec<u64>,
    /// Iteration budget per stage.
    pub max_iterations: usize,
    /// Convergence threshold on ‖[P, Q]‖_F.
    pub el_tolerance: f64,
    /// A run stops as stalled after this many consecutive iterations with
    /// relative decrease below `stall_decrease`.
    pub stall_iterations: usize,
    pub stall_decrease: f64,
    /// Sufficient-decrease constant of the Armijo condition.
    pub armijo: f64,
    pub backtrack: f64,
    pub max_backtracks: usize,
    /// First trial step length η‖K‖_F.
    pub initial_step: f64,
    pub max_step: f64,
    /// Checks the analytic first variation against finite differences at the
    /// first iterate of every run.
    pub gradient_check: bool,
    pub tolerances: Tolerances,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Auxiliary { mu: 0.5 },
            seeds: (0..32).collect(),
            max_iterations: 3000,
            el_tolerance: 1e-9,
            stall_iterations: 100,
            stall_decrease: 1e-15,
            armijo: 1e-4,
            backtrack: 0.5,
            max_backtracks: 60,
            initial_step: 0.05,
            max_step: 1.0,
            gradient_check: true,
            tolerances: Tolerances::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        let positive = [
            ("el_tolerance", self.el_tolerance),
            ("stall_decrease", self.stall_decrease),
            ("armijo", self.armijo),
            ("initial_step", self.initial_step),
            ("max_step", self.max_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::InvalidInput("backtrack must lie in (0, 1)".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidInput("seed list is empty".into()));
        }
        match self.mode {
            Mode::Auxiliary { mu } if !mu.is_finite() => Err(Error::InvalidInput("μ must be finite".into())),
            Mode::Constrained { kappa, penalty } => {
                if !(kappa.is_finite() && kappa > 0.0) {
                    return Err(Error::InvalidInput("κ must be positive".into()));
                }
                if !(penalty.initial > 0.0 && penalty.growth >= 1.0 && penalty.refine_threshold > 0.0) {
                    return Err(Error::InvalidInput("invalid penalty schedule".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}
