use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use dstlab_core::lattice::{LatticeGeometry, LatticeOccupation, MomentumUnits, TraceWeighting, WeightPreset, Weights};
use dstlab_core::solver::SolverConfig;
use dstlab_core::Tolerances;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Failure;

/// Top-level configuration document shared by all subcommands.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand on the command line when present.
    #[serde(default)]
    pub subcommand: Option<String>,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = read_text(path)?;
        serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
    }

    /// Parses the parameter block; a missing block counts as `{}`.
    pub fn params<T: DeserializeOwned>(&self, subcommand: &str) -> Result<T, Failure> {
        let v = if self.params.is_null() { Value::Object(Default::default()) } else { self.params.clone() };
        serde_json::from_value(v).map_err(|e| Failure::invalid(format!("params for {subcommand}: {e}")))
    }

    pub fn check_subcommand(&self, name: &str) -> Result<(), Failure> {
        match &self.subcommand {
            Some(s) if s != name => Err(Failure::invalid(format!("config is for `{s}`, not `{name}`"))),
            _ => Ok(()),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn load_tolerances(path: &Path) -> Result<Tolerances, Failure> {
    let t: Tolerances =
        serde_json::from_str(&read_text(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    t.validate()?;
    Ok(t)
}

/// Parses "0,1,4..8,10..=12" into an explicit seed list.
pub fn parse_seed_list(s: &str) -> Result<Vec<u64>, Failure> {
    let bad = |part: &str| Failure::invalid(format!("bad seed list entry `{part}`"));
    let mut seeds = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (b, inclusive) = match b.strip_prefix('=') {
                Some(b) => (b, true),
                None => (b, false),
            };
            let a: u64 = a.trim().parse().map_err(|_| bad(part))?;
            let b: u64 = b.trim().parse().map_err(|_| bad(part))?;
            let end = if inclusive { b.checked_add(1).ok_or_else(|| bad(part))? } else { b };
            if end <= a {
                return Err(bad(part));
            }
            seeds.extend(a..end);
        } else {
            seeds.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    if seeds.is_empty() {
        return Err(Failure::invalid("seed list is empty"));
    }
    Ok(seeds)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeParams {
    pub n: usize,
    pub m: usize,
    pub f: usize,
    #[serde(default)]
    pub solver: SolverConfig,
}

/// Parameters of commands that analyse a stored projector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectorParams {
    /// Projector JSON, relative to the config file.
    pub projector: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// m = 3, ρ = 2/3, Pauli vectors of length v at 120°.
    SymmetricTriangle,
    /// m = 4, ρ = 1/2, Pauli vectors of the given length along a tetrahedron.
    RegularTetrahedron,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandscapeParams {
    pub family: Family,
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { lo: -3.0, hi: 3.0, points: 61 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsSpec {
    Preset(WeightPreset),
    Explicit(Weights),
}

impl Default for WeightsSpec {
    fn default() -> Self {
        WeightsSpec::Preset(WeightPreset::Sphere)
    }
}

impl WeightsSpec {
    pub fn resolve(&self, geom: &LatticeGeometry) -> Weights {
        match self {
            WeightsSpec::Preset(p) => Weights::preset(*p, geom),
            WeightsSpec::Explicit(w) => w.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSpec {
    pub target: f64,
    #[serde(default)]
    pub weighting: TraceWeighting,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeParams {
    pub geometry: LatticeGeometry,
    #[serde(default = "dstlab_core::lattice::two_state_occupation")]
    pub occupation: LatticeOccupation,
    #[serde(default)]
    pub weights: WeightsSpec,
    #[serde(default)]
    pub units: Option<MomentumUnits>,
    #[serde(default)]
    pub trace: Option<TraceSpec>,
    #[serde(default)]
    pub grid: Grid,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightconeParams {
    /// Exact values substituted for C0..C3, D0..D3: integers, decimals or
    /// "p/q" strings.
    #[serde(default)]
    pub values: BTreeMap<String, Value>,
}

fn default_stability_tolerance() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityParams {
    /// CSV with columns qsq, a, b, relative to the config file.
    pub samples: PathBuf,
    pub masses: Vec<f64>,
    /// Sea weights ρ_β; all 1 when omitted.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "default_stability_tolerance")]
    pub tolerance: f64,
}
