use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dstlab_bench::{lattice_system, projector};
use dstlab_core::continuum::{dirac_sea_expansion, expansion_product};
use dstlab_core::indefinite::{all_chains, evaluate, ChainData, Functional};
use dstlab_core::lattice::{lattice_action, MomentumUnits, WeightPreset, Weights};
use dstlab_core::linalg::CMat;
use dstlab_core::solver::step;
use dstlab_core::Tolerances;

fn chains(c: &mut Criterion) {
    let mut g = c.benchmark_group("chain_roots");
    for (n, m) in [(1, 4), (1, 9), (2, 8)] {
        let p = projector(n, m, 2);
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_m{m}")), &p, |b, p| {
            b.iter(|| all_chains(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn action_and_gradient(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("action");
    for m in [4, 9, 16] {
        let p = projector(1, m, 2);
        g.bench_with_input(BenchmarkId::new("value", m), &p, |b, p| {
            b.iter(|| ChainData::new(black_box(p)).unwrap().total(Functional::lagrangian(0.5)))
        });
        g.bench_with_input(BenchmarkId::new("q_kernel", m), &p, |b, p| {
            b.iter(|| evaluate(black_box(p), Functional::lagrangian(0.5), &tol).unwrap())
        });
    }
    g.finish();
}

fn unitary_step(c: &mut Criterion) {
    let p = projector(1, 9, 2);
    let dim = p.space().dim();
    let k = CMat::from_fn(dim, dim, |i, j| {
        let x = ((i * 31 + j * 17) % 13) as f64 / 13.0 - 0.5;
        let y = ((i * 7 + j * 29) % 11) as f64 / 11.0 - 0.5;
        dstlab_core::linalg::C64::new(x + y, if i == j { 0.0 } else { x - y })
    });
    let k = (&k + k.adjoint()) * dstlab_core::linalg::C64::new(0.5, 0.0);
    c.bench_function("unitary_step_m9", |b| b.iter(|| step(black_box(&p), &k, 1e-2)));
}

fn lattice(c: &mut Criterion) {
    let (geom, occ) = lattice_system();
    let units = MomentumUnits::standard(&geom);
    let w = Weights::preset(WeightPreset::Sphere, &geom);
    c.bench_function("lattice_action_8x6", |b| {
        b.iter(|| lattice_action(&geom, &units, black_box(&occ), &w).unwrap().total)
    });
}

fn lightcone(c: &mut Criterion) {
    let sea = dirac_sea_expansion();
    c.bench_function("lightcone_product", |b| b.iter(|| expansion_product(black_box(&sea)).unwrap()));
}

criterion_group!(benches, chains, action_and_gradient, unitary_step, lattice, lightcone);
criterion_main!(benches);
