use clap::ValueEnum;
use dstlab_core::lattice::{two_state_occupation, uniform_grid, LatticeGeometry, WeightPreset};
use dstlab_core::solver::{Mode, RunStatus, SolverConfig};
use dstlab_core::Tolerances;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{self, Outcome, Output, PauliReport};
use crate::config::{Grid, LatticeParams, MinimizeParams, WeightsSpec};
use crate::error::Failure;
use crate::Task;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Pauli vectors of critical minimizers for m = 4, 5, 8, 9.
    #[value(name = "fig1-2")]
    Fig12,
    /// λ± of the symmetric three-point family across the causal transition.
    Fig3,
    /// Action surface of the 8×6 lattice with two occupied states.
    Fig5,
}

pub const PAULI_SIZES: [usize; 4] = [4, 5, 8, 9];

#[derive(Serialize)]
struct PauliSummary {
    m: usize,
    best_seed: u64,
    status: RunStatus,
    action: f64,
    pauli: Option<PauliReport>,
}

fn pauli_params(m: usize, seeds: &[u64], tol: Tolerances) -> MinimizeParams {
    let solver = SolverConfig { mode: Mode::Auxiliary { mu: 0.5 }, seeds: seeds.to_vec(), tolerances: tol, ..Default::default() };
    MinimizeParams { n: 1, m, f: 2, solver }
}

fn fig12(seeds: Vec<u64>, tol: Tolerances) -> Result<Outcome, Failure> {
    let mut outputs = Vec::new();
    let mut summary = Vec::new();
    let mut stalled = Vec::new();
    for m in PAULI_SIZES {
        let (res, outcome) = commands::minimize(&pauli_params(m, &seeds, tol))?;
        let corr = dstlab_core::correlation::local_correlations(&res.best)?;
        outputs.push(Output { name: format!("fig1-2_m{m}_pauli_vectors.csv"), bytes: commands::pauli_csv(&corr)? });
        summary.push(PauliSummary {
            m,
            best_seed: res.best_seed,
            status: res.status,
            action: res.action,
            pauli: Some(commands::pauli_report(&corr)?),
        });
        if outcome.warning.is_some() {
            stalled.push(m);
        }
    }
    outputs.push(Output::json("fig1-2_summary.json", &summary));
    let warning = (!stalled.is_empty()).then(|| format!("iteration budget exhausted for m = {stalled:?}"));
    Ok(Outcome { outputs, warning })
}

fn fig5_params() -> LatticeParams {
    LatticeParams {
        geometry: LatticeGeometry::new(8, 6).expect("fixed geometry"),
        occupation: two_state_occupation(),
        weights: WeightsSpec::Preset(WeightPreset::Sphere),
        units: None,
        trace: None,
        grid: Grid::default(),
    }
}

/// v-grid of the three-point family from its smallest admissible length
/// 2/3 across the transition at 4√3/9 ≈ 0.7698.
pub fn fig3_grid() -> Vec<f64> {
    uniform_grid(2.0 / 3.0, 1.0, 201)
}

pub fn prepare(figure: Figure, seeds: Option<Vec<u64>>, tol: Option<Tolerances>) -> Result<(Value, Task), Failure> {
    let reject = |what: &str| Failure::invalid(format!("{what} only applies to fig1-2"));
    match figure {
        Figure::Fig12 => {
            let seeds = seeds.unwrap_or_else(|| (0..32).collect());
            let tol = tol.unwrap_or_default();
            let params: Vec<Value> =
                PAULI_SIZES.iter().map(|&m| serde_json::to_value(pauli_params(m, &seeds, tol)).unwrap()).collect();
            let canonical = json!({ "subcommand": "reproduce", "params": { "figure": "fig1-2", "runs": params } });
            Ok((canonical, Box::new(move || fig12(seeds, tol))))
        }
        Figure::Fig3 => {
            if seeds.is_some() {
                return Err(reject("--seed-list"));
            }
            if tol.is_some() {
                return Err(reject("--tolerances"));
            }
            let canonical = json!({
                "subcommand": "reproduce",
                "params": { "figure": "fig3", "family": "symmetric_triangle", "start": 2.0 / 3.0, "end": 1.0, "points": 201 }
            });
            let task = || -> Result<Outcome, Failure> {
                let bytes = commands::triangle_spectrum_csv(&fig3_grid())?;
                Ok(Outcome { outputs: vec![Output { name: "fig3.csv".into(), bytes }], warning: None })
            };
            Ok((canonical, Box::new(task)))
        }
        Figure::Fig5 => {
            if seeds.is_some() {
                return Err(reject("--seed-list"));
            }
            if tol.is_some() {
                return Err(reject("--tolerances"));
            }
            let p = fig5_params();
            let canonical = json!({ "subcommand": "reproduce", "params": { "figure": "fig5", "lattice": serde_json::to_value(&p).unwrap() } });
            Ok((canonical, Box::new(move || commands::lattice(&p, "fig5.csv", "fig5_minima.json"))))
        }
    }
}
