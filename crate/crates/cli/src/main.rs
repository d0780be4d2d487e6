//! `dstlab`: batch runner for the discrete space-time laboratory.
//!
//! Every subcommand validates its configuration, computes all results in
//! memory and only then writes them together with `manifest.json`.
//! Exit codes: 0 success, 2 validation error, 3 numerical failure,
//! 4 divergence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod manifest;
mod reproduce;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dstlab_core::indefinite::{critical_mu, FermionicProjector};
use dstlab_core::solver::{Mode, PenaltySchedule};
use dstlab_core::Tolerances;
use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::config::{
    load_tolerances, parse_seed_list, read_text, ExperimentConfig, LandscapeParams, LatticeParams, LightconeParams,
    MinimizeParams, ProjectorParams, StabilityParams,
};
use crate::error::Failure;
use crate::manifest::{check_out_dir, config_hash, resolve_out_dir, sha256_hex, write_run, FileEntry, RunManifest};
use crate::reproduce::Figure;

#[derive(Parser)]
#[command(name = "dstlab", version, about = "Numerical experiments on fermion systems in discrete space-time")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Seeds as a list with ranges, e.g. `0..32` or `1,4,9..=12`.
    #[arg(long)]
    seed_list: Option<String>,
    /// Output directory (must be empty or absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file overriding numerical tolerances.
    #[arg(long)]
    tolerances: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Aux,
    Constrained,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the auxiliary action or the constrained variational principle.
    Minimize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// μ of the auxiliary action (default 1/2n).
        #[arg(long)]
        mu: Option<f64>,
        /// Target value of Σ|A_xy|² in constrained mode.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Causal graph of a stored projector.
    ClassifyCausal(Common),
    /// Local correlation data (ρ_x, v_x) of a stored two-particle projector.
    PauliVectors(Common),
    /// Sweep of a one-parameter projector family.
    Landscape(Common),
    /// Action surface of a static isotropic lattice system.
    Lattice(Common),
    /// Exact light-cone expansion of the closed chain.
    LightconeCheck(Common),
    /// Stability test of sampled functions a(q²), b(q²).
    StateStability(Common),
    /// Canned runs: Pauli vectors, the three-point λ± sweep, the lattice surface.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long)]
        seed_list: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tolerances: Option<PathBuf>,
    },
}

type Task = Box<dyn FnOnce() -> Result<Outcome, Failure>>;

struct Job {
    subcommand: String,
    canonical: Value,
    inputs: Vec<FileEntry>,
    out_flag: Option<PathBuf>,
    out_config: Option<PathBuf>,
    task: Task,
}

struct Loaded {
    config: ExperimentConfig,
    base: PathBuf,
    tolerances: Option<Tolerances>,
    seeds: Option<Vec<u64>>,
}

fn load(common: &Common, name: &str) -> Result<Loaded, Failure> {
    let config = ExperimentConfig::load(&common.config)?;
    config.check_subcommand(name)?;
    let tolerances = match &common.tolerances {
        Some(p) => Some(load_tolerances(p)?),
        None => config.tolerances,
    };
    if let Some(t) = &tolerances {
        t.validate()?;
    }
    let seeds = match &common.seed_list {
        Some(s) => Some(parse_seed_list(s)?),
        None => config.seeds.clone(),
    };
    let base = common.config.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { config, base, tolerances, seeds })
}

fn input_file(base: &Path, rel: &Path) -> Result<(String, FileEntry), Failure> {
    let path = base.join(rel);
    let text = read_text(&path)?;
    let entry = FileEntry { path: rel.display().to_string(), sha256: sha256_hex(text.as_bytes()), bytes: text.len() };
    Ok((text, entry))
}

fn apply_mode(
    p: &mut MinimizeParams,
    mode: Option<ModeArg>,
    mu: Option<f64>,
    kappa: Option<f64>,
) -> Result<(), Failure> {
    let aux = matches!(mode, Some(ModeArg::Aux)) || (mode.is_none() && mu.is_some());
    let constrained = matches!(mode, Some(ModeArg::Constrained)) || (mode.is_none() && kappa.is_some());
    if aux && constrained {
        return Err(Failure::invalid("--mu and --kappa select different modes"));
    }
    if (aux && kappa.is_some()) || (constrained && mu.is_some()) {
        return Err(Failure::invalid("--mu belongs to --mode aux, --kappa to --mode constrained"));
    }
    if aux {
        let current = match p.solver.mode {
            Mode::Auxiliary { mu } => Some(mu),
            _ => None,
        };
        let mu = mu.or(current).unwrap_or_else(|| critical_mu(p.n));
        p.solver.mode = Mode::Auxiliary { mu };
    } else if constrained {
        let (current, penalty) = match p.solver.mode {
            Mode::Constrained { kappa, penalty } => (Some(kappa), penalty),
            _ => (None, PenaltySchedule::default()),
        };
        let kappa = kappa.or(current).ok_or_else(|| Failure::invalid("constrained mode needs --kappa"))?;
        p.solver.mode = Mode::Constrained { kappa, penalty };
    }
    Ok(())
}

fn plain_job(name: &str, params: Value, tol: Option<Tolerances>, l: &Loaded, common: &Common, task: Task) -> Job {
    let mut canonical = json!({ "subcommand": name, "params": params });
    if let Some(t) = tol {
        canonical["tolerances"] = serde_json::to_value(t).expect("tolerances serialize");
    }
    if l.seeds.is_some() {
        eprintln!("dstlab: {name} takes no seeds; the seed list is ignored");
    }
    Job {
        subcommand: name.into(),
        canonical,
        inputs: Vec::new(),
        out_flag: common.out.clone(),
        out_config: l.config.output_dir.clone(),
        task,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("parameters serialize")
}

fn prepare(command: Command) -> Result<Job, Failure> {
    match command {
        Command::Minimize { common, mode, mu, kappa } => {
            let l = load(&common, "minimize")?;
            let mut p: MinimizeParams = l.config.params("minimize")?;
            if let Some(t) = l.tolerances {
                p.solver.tolerances = t;
            }
            if let Some(s) = &l.seeds {
                p.solver.seeds = s.clone();
            }
            apply_mode(&mut p, mode, mu, kappa)?;
            p.solver.validate()?;
            let canonical = json!({ "subcommand": "minimize", "params": to_value(&p) });
            Ok(Job {
                subcommand: "minimize".into(),
                canonical,
                inputs: Vec::new(),
                out_flag: common.out,
                out_config: l.config.output_dir,
                task: Box::new(move || commands::minimize(&p).map(|(_, o)| o)),
            })
        }
        Command::ClassifyCausal(common) => projector_job("classify-causal", common),
        Command::PauliVectors(common) => projector_job("pauli-vectors", common),
        Command::Landscape(common) => {
            let l = load(&common, "landscape")?;
            let p: LandscapeParams = l.config.params("landscape")?;
            let tol = l.tolerances.unwrap_or_default();
            let params = to_value(&p);
            Ok(plain_job("landscape", params, Some(tol), &l, &common, Box::new(move || commands::landscape(&p, &tol))))
        }
        Command::Lattice(common) => {
            let l = load(&common, "lattice")?;
            let p: LatticeParams = l.config.params("lattice")?;
            p.occupation.validate(&p.geometry)?;
            p.weights.resolve(&p.geometry).validate(&p.geometry)?;
            let params = to_value(&p);
            Ok(plain_job(
                "lattice",
                params,
                None,
                &l,
                &common,
                Box::new(move || commands::lattice(&p, "surface.csv", "minima.json")),
            ))
        }
        Command::LightconeCheck(common) => {
            let l = load(&common, "lightcone-check")?;
            let p: LightconeParams = l.config.params("lightcone-check")?;
            let params = to_value(&p);
            Ok(plain_job("lightcone-check", params, None, &l, &common, Box::new(move || commands::lightcone_check(&p))))
        }
        Command::StateStability(common) => {
            let l = load(&common, "state-stability")?;
            let p: StabilityParams = l.config.params("state-stability")?;
            let (samples, entry) = input_file(&l.base, &p.samples)?;
            let params = to_value(&p);
            let mut job = plain_job(
                "state-stability",
                params,
                None,
                &l,
                &common,
                Box::new(move || commands::state_stability(&p, &samples)),
            );
            job.canonical["inputs"] = json!({ "samples": entry.sha256 });
            job.inputs.push(entry);
            Ok(job)
        }
        Command::Reproduce { figure, seed_list, out, tolerances } => {
            let seeds = seed_list.as_deref().map(parse_seed_list).transpose()?;
            let tol = tolerances.as_deref().map(load_tolerances).transpose()?;
            let (canonical, task) = reproduce::prepare(figure, seeds, tol)?;
            Ok(Job {
                subcommand: "reproduce".into(),
                canonical,
                inputs: Vec::new(),
                out_flag: out,
                out_config: None,
                task,
            })
        }
    }
}

fn projector_job(name: &'static str, common: Common) -> Result<Job, Failure> {
    let l = load(&common, name)?;
    let p: ProjectorParams = l.config.params(name)?;
    let (text, entry) = input_file(&l.base, &p.projector)?;
    let projector = FermionicProjector::from_json(&text)?;
    let tol = l.tolerances.unwrap_or_default();
    let task: Task = match name {
        "classify-causal" => Box::new(move || commands::classify_causal(&projector, &tol)),
        _ => Box::new(move || commands::pauli_vectors(&projector)),
    };
    let mut job = plain_job(name, to_value(&p), Some(tol), &l, &common, task);
    job.canonical["inputs"] = json!({ "projector": entry.sha256 });
    job.inputs.push(entry);
    Ok(job)
}

fn run(command: Command) -> Result<u8, Failure> {
    let job = prepare(command)?;
    let hash = config_hash(&job.canonical);
    let dir = resolve_out_dir(job.out_flag.as_deref(), job.out_config.as_deref(), &job.subcommand, &hash);
    check_out_dir(&dir)?;
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let outcome = (job.task)()?;
    let mut manifest = RunManifest::new(&job.subcommand, job.canonical, job.inputs);
    manifest.exit_code = if outcome.warning.is_some() { 3 } else { 0 };
    manifest.message = outcome.warning.clone();
    manifest.started_at = started.to_rfc3339();
    manifest.finished_at = chrono::Utc::now().to_rfc3339();
    manifest.wall_time_s = clock.elapsed().as_secs_f64();
    let path = write_run(&dir, &outcome.outputs, &mut manifest)?;
    if let Some(w) = &outcome.warning {
        eprintln!("dstlab: numerical failure: {w}");
    }
    println!("{}", path.display());
    Ok(manifest.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("dstlab: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
