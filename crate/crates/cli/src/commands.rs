use std::collections::BTreeMap;

use dstlab_core::causal::{causal_graph, AdjacencyEntry, CausalClass, ClassCounts};
use dstlab_core::continuum::lightcone::ExpansionJson;
use dstlab_core::continuum::{
    dirac_sea_expansion, expansion_product, gradient_expansion, state_stability_check, SeaConfig, StabilityVerdict,
    StateStabilityFunctions, Symbol,
};
use dstlab_core::correlation::{
    geometry_diagnostics, lambda_pm, local_correlations, projector_from_correlations, regular_tetrahedron,
    symmetric_triangle, GeometryReport, LocalCorrelation,
};
use dstlab_core::indefinite::{DiscreteSpacetime, FermionicProjector};
use dstlab_core::lattice::{
    enforce_trace_weighted, landscape_scan_2d, trace_condition_weighted, uniform_grid, LatticeGeometry, LatticeOccupation,
    LocalMinimum, MomentumUnits, Weights,
};
use dstlab_core::solver::{self, landscape_scan, Mode, MultiplierEstimate, RunStatus, SeedSummary, SolverResult};
use dstlab_core::Tolerances;
use serde::{Deserialize, Serialize};

use crate::config::{Family, LandscapeParams, LatticeParams, LightconeParams, MinimizeParams, StabilityParams};
use crate::error::Failure;

/// A file produced by a run, kept in memory until the run has finished.
pub struct Output {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Output {
    pub fn json<T: Serialize>(name: &str, value: &T) -> Self {
        let mut bytes = serde_json::to_vec_pretty(value).expect("result types serialize");
        bytes.push(b'\n');
        Output { name: name.into(), bytes }
    }

    pub fn text(name: &str, text: String) -> Self {
        Output { name: name.into(), bytes: text.into_bytes() }
    }
}

/// Files of a finished computation. `warning` is set when the computation
/// completed but did not meet its own convergence criterion (exit code 3).
#[derive(Default)]
pub struct Outcome {
    pub outputs: Vec<Output>,
    pub warning: Option<String>,
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| Failure::Numerical(e.to_string()))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn pauli_csv(corr: &LocalCorrelation) -> Result<Vec<u8>, Failure> {
    let rows = corr.rho.iter().zip(&corr.v).enumerate().map(|(x, (r, v))| {
        vec![x.to_string(), r.to_string(), v[0].to_string(), v[1].to_string(), v[2].to_string()]
    });
    csv_bytes(&["point", "rho", "vx", "vy", "vz"], rows)
}

#[derive(Serialize)]
pub struct PauliReport {
    pub schema: &'static str,
    pub m: usize,
    pub rho_sum: f64,
    pub v_sum: [f64; 3],
    pub signature_violation: f64,
    pub geometry: GeometryReport,
}

pub fn pauli_report(corr: &LocalCorrelation) -> Result<PauliReport, Failure> {
    Ok(PauliReport {
        schema: "dstlab.pauli/1",
        m: corr.m(),
        rho_sum: corr.rho_sum(),
        v_sum: corr.v_sum(),
        signature_violation: corr.signature_violation(),
        geometry: geometry_diagnostics(corr)?,
    })
}

fn two_particle(p: &FermionicProjector) -> bool {
    p.space().n() == 1 && p.f() == 2
}

#[derive(Serialize)]
struct MinimizeReport<'a> {
    schema: &'static str,
    n: usize,
    m: usize,
    f: usize,
    mode: Mode,
    best_seed: u64,
    status: RunStatus,
    action: f64,
    constraint: f64,
    mu_eff: f64,
    el_residual: f64,
    multiplier: Option<MultiplierEstimate>,
    pauli: Option<PauliReport>,
    runs: &'a [SeedSummary],
}

pub fn minimize(p: &MinimizeParams) -> Result<(SolverResult, Outcome), Failure> {
    let space = DiscreteSpacetime::new(p.n, p.m)?;
    let res = solver::minimize(space, p.f, &p.solver)?;
    let summaries: Vec<SeedSummary> = res.runs.iter().map(|r| r.summary()).collect();
    let mut outputs = Vec::new();
    let pauli = if two_particle(&res.best) {
        let corr = local_correlations(&res.best)?;
        outputs.push(Output { name: "pauli_vectors.csv".into(), bytes: pauli_csv(&corr)? });
        Some(pauli_report(&corr)?)
    } else {
        None
    };
    let report = MinimizeReport {
        schema: "dstlab.minimize/1",
        n: p.n,
        m: p.m,
        f: p.f,
        mode: p.solver.mode,
        best_seed: res.best_seed,
        status: res.status,
        action: res.action,
        constraint: res.constraint,
        mu_eff: res.mu_eff,
        el_residual: res.el_residual,
        multiplier: res.multiplier,
        pauli,
        runs: &summaries,
    };
    outputs.insert(0, Output::json("result.json", &report));
    outputs.insert(1, Output::text("projector.json", res.best.to_json(p.solver.tolerances.projector) + "\n"));
    let traces = res.runs.iter().flat_map(|r| {
        r.trace.iter().map(move |t| {
            vec![
                r.seed.to_string(),
                t.stage.to_string(),
                t.iteration.to_string(),
                t.objective.to_string(),
                t.el_residual.to_string(),
            ]
        })
    });
    outputs.push(Output { name: "traces.csv".into(), bytes: csv_bytes(&["seed", "stage", "iteration", "objective", "el_residual"], traces)? });
    let warning = (res.status == RunStatus::MaxIterations)
        .then(|| format!("best run (seed {}) exhausted its iteration budget", res.best_seed));
    Ok((res, Outcome { outputs, warning }))
}

#[derive(Serialize)]
struct CausalReport {
    schema: &'static str,
    m: usize,
    symmetric: bool,
    counts: ClassCounts,
    adjacency: Vec<AdjacencyEntry>,
    classes: Vec<Vec<CausalClass>>,
}

pub fn classify_causal(p: &FermionicProjector, tol: &Tolerances) -> Result<Outcome, Failure> {
    let g = causal_graph(p, tol)?;
    let counts = g.counts();
    let report = CausalReport {
        schema: "dstlab.causal/1",
        m: g.m,
        symmetric: g.is_symmetric(),
        counts,
        adjacency: g.adjacency(),
        classes: g.classes.clone(),
    };
    let summary = [
        (CausalClass::Timelike, counts.timelike),
        (CausalClass::Spacelike, counts.spacelike),
        (CausalClass::Undetermined, counts.undetermined),
    ]
    .into_iter()
    .map(|(c, n)| vec![c.label().to_string(), n.to_string()]);
    Ok(Outcome {
        outputs: vec![
            Output::json("causal_graph.json", &report),
            Output { name: "causal_summary.csv".into(), bytes: csv_bytes(&["class", "count"], summary)? },
            Output::text("causal_edges.dimacs", g.to_dimacs()),
        ],
        warning: None,
    })
}

pub fn pauli_vectors(p: &FermionicProjector) -> Result<Outcome, Failure> {
    let corr = local_correlations(p)?;
    Ok(Outcome {
        outputs: vec![
            Output { name: "pauli_vectors.csv".into(), bytes: pauli_csv(&corr)? },
            Output::json("geometry.json", &pauli_report(&corr)?),
        ],
        warning: None,
    })
}

pub fn landscape(p: &LandscapeParams, tol: &Tolerances) -> Result<Outcome, Failure> {
    if p.points == 0 || !(p.start.is_finite() && p.end.is_finite()) {
        return Err(Failure::invalid("landscape needs a finite range and at least one point"));
    }
    let grid = uniform_grid(p.start, p.end, p.points);
    let projector_tol = tol.projector;
    let rows = match p.family {
        Family::SymmetricTriangle => landscape_scan(symmetric_triangle, &grid, tol),
        Family::RegularTetrahedron => {
            landscape_scan(|len| projector_from_correlations(&regular_tetrahedron(len), projector_tol), &grid, tol)
        }
    };
    let width = rows.iter().map(|r| r.roots.len()).max().unwrap_or(0);
    let mut header = vec!["parameter".to_string(), "action".into(), "constraint".into(), "class".into()];
    for i in 0..width {
        header.push(format!("root{i}_re"));
        header.push(format!("root{i}_im"));
    }
    header.push("error".into());
    let body = rows.iter().map(|r| {
        let mut rec = vec![r.parameter.to_string(), opt(r.action), opt(r.constraint)];
        rec.push(r.class.map(|c| c.label().to_string()).unwrap_or_default());
        for i in 0..width {
            let z = r.roots.get(i);
            rec.push(opt(z.map(|z| z[0])));
            rec.push(opt(z.map(|z| z[1])));
        }
        rec.push(r.error.clone().unwrap_or_default());
        rec
    });
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Ok(Outcome { outputs: vec![Output { name: "landscape.csv".into(), bytes: csv_bytes(&header, body)? }], warning: None })
}

#[derive(Serialize)]
struct LatticeReport<'a> {
    schema: &'static str,
    geometry: LatticeGeometry,
    units: MomentumUnits,
    weights: &'a Weights,
    occupation: &'a LatticeOccupation,
    trace: f64,
    origin: Option<f64>,
    global_minima: Vec<LocalMinimum>,
    minima: &'a [LocalMinimum],
}

pub fn lattice(p: &LatticeParams, surface_name: &str, report_name: &str) -> Result<Outcome, Failure> {
    let geom = p.geometry;
    let units = p.units.unwrap_or_else(|| MomentumUnits::standard(&geom));
    let weights = p.weights.resolve(&geom);
    let weighting = p.trace.map(|t| t.weighting).unwrap_or_default();
    let occ = match p.trace {
        Some(t) => enforce_trace_weighted(&p.occupation, t.target, t.weighting)?,
        None => p.occupation.clone(),
    };
    if p.grid.points < 3 || !(p.grid.lo < p.grid.hi) {
        return Err(Failure::invalid("lattice grid needs lo < hi and at least 3 points"));
    }
    let taus = uniform_grid(p.grid.lo, p.grid.hi, p.grid.points);
    let surface = landscape_scan_2d(&geom, &units, &occ, &weights, &taus)?;
    let report = LatticeReport {
        schema: "dstlab.lattice/1",
        geometry: geom,
        units,
        weights: &weights,
        occupation: &occ,
        trace: trace_condition_weighted(&occ, weighting),
        origin: surface.value_at(0.0, 0.0),
        global_minima: surface.global_minima(1e-12),
        minima: &surface.minima,
    };
    Ok(Outcome {
        outputs: vec![Output::text(surface_name, surface.to_csv()), Output::json(report_name, &report)],
        warning: None,
    })
}

#[derive(Serialize)]
struct LightconeReport {
    schema: &'static str,
    /// Substituted values as [numerator, denominator].
    values: BTreeMap<String, [i64; 2]>,
    sea: ExpansionJson,
    chain: ExpansionJson,
    gradient: ExpansionJson,
}

pub fn lightcone_check(p: &LightconeParams) -> Result<Outcome, Failure> {
    let mut values = BTreeMap::new();
    for (name, v) in &p.values {
        let sym = Symbol::parse(name).ok_or_else(|| Failure::invalid(format!("unknown symbol `{name}`")))?;
        values.insert(sym, dstlab_core::continuum::lightcone::parse_rational(v)?);
    }
    let sea = dirac_sea_expansion();
    let chain = expansion_product(&sea)?;
    let gradient = gradient_expansion(&chain);
    let report = LightconeReport {
        schema: "dstlab.lightcone/1",
        values: values.iter().map(|(s, r)| (s.name().to_string(), [*r.numer(), *r.denom()])).collect(),
        sea: sea.substitute(&values).to_json(),
        chain: chain.substitute(&values).to_json(),
        gradient: gradient.substitute(&values).to_json(),
    };
    Ok(Outcome { outputs: vec![Output::json("lightcone.json", &report)], warning: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sample {
    qsq: f64,
    a: f64,
    b: f64,
}

#[derive(Serialize)]
struct StabilityReport<'a> {
    schema: &'static str,
    seas: &'a SeaConfig,
    tolerance: f64,
    verdict: StabilityVerdict,
}

pub fn state_stability(p: &StabilityParams, samples_csv: &str) -> Result<Outcome, Failure> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(samples_csv.as_bytes());
    let (mut qsq, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.deserialize::<Sample>() {
        let s = rec?;
        qsq.push(s.qsq);
        a.push(s.a);
        b.push(s.b);
    }
    let fns = StateStabilityFunctions::new(qsq, a, b)?;
    let weights = p.weights.clone().unwrap_or_else(|| vec![1.0; p.masses.len()]);
    let seas = SeaConfig::new(p.masses.clone(), weights)?;
    if !(p.tolerance >= 0.0 && p.tolerance.is_finite()) {
        return Err(Failure::invalid("tolerance must be non-negative"));
    }
    let verdict = state_stability_check(&fns, &seas, p.tolerance)?;
    let report = StabilityReport { schema: "dstlab.stability/1", seas: &seas, tolerance: p.tolerance, verdict };
    Ok(Outcome { outputs: vec![Output::json("stability.json", &report)], warning: None })
}

/// (v, λ₊, λ₋) of the chain between two points of the symmetric triangle.
pub fn triangle_spectrum_csv(grid: &[f64]) -> Result<Vec<u8>, Failure> {
    let rows = grid.iter().map(|&v| {
        let c = dstlab_core::correlation::symmetric_triangle_correlations(v);
        let d = dstlab_core::correlation::discriminant(c.rho[0], &c.v[0], c.rho[1], &c.v[1]);
        let [lp, lm] = lambda_pm(c.rho[0], &c.v[0], c.rho[1], &c.v[1]);
        vec![v.to_string(), lp.re.to_string(), lp.im.to_string(), lm.re.to_string(), lm.im.to_string(), d.to_string()]
    });
    csv_bytes(&["v", "re_lambda_plus", "im_lambda_plus", "re_lambda_minus", "im_lambda_minus", "discriminant"], rows)
}
