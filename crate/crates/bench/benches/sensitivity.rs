use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mzi_opt_bench::{coherent_squeezed, dual_squeezed, oracle_state};
use mzi_opt_core::fock_oracle::{oracle_sensitivity, OracleConfig};
use mzi_opt_core::prelude::*;

fn closed_forms(c: &mut Criterion) {
    let state = dual_squeezed(PmcId::Pmc3);
    let moments = StateMoments::of(&state);
    let angles = BsAngles::new(1.2, 1.1).unwrap();
    let ext = PhaseConfig::external(0.97 * PI, 0.0);
    let mut g = c.benchmark_group("sensitivity");
    for scheme in [Scheme::DifferenceIntensity, Scheme::SingleModeIntensity, Scheme::BalancedHomodyne] {
        g.bench_function(format!("{scheme:?}"), |b| {
            b.iter(|| sensitivity(scheme, black_box(&moments), black_box(angles), &ext))
        });
    }
    g.bench_function("moments", |b| b.iter(|| StateMoments::of(black_box(&state))));
    g.finish();
}

fn optimizers(c: &mut Criterion) {
    let mut g = c.benchmark_group("joint_optimize");
    g.sample_size(20);
    let fig = coherent_squeezed();
    let pmc3 = dual_squeezed(PmcId::Pmc3);
    g.bench_function("difference", |b| {
        b.iter(|| joint_optimize(black_box(&fig), Scheme::DifferenceIntensity, Reference::None))
    });
    g.bench_function("single_mode", |b| {
        b.iter(|| joint_optimize(black_box(&pmc3), Scheme::SingleModeIntensity, Reference::None))
    });
    g.bench_function("homodyne", |b| {
        b.iter(|| joint_optimize(black_box(&pmc3), Scheme::BalancedHomodyne, Reference::External))
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let state = oracle_state();
    let cfg = OracleConfig::default();
    let angles = BsAngles::balanced();
    let phases = PhaseConfig::external(0.6 * PI, 0.0);
    let mut g = c.benchmark_group("fock_oracle");
    g.sample_size(10);
    g.bench_function("difference", |b| {
        b.iter(|| oracle_sensitivity(black_box(&state), angles, &phases, Scheme::DifferenceIntensity, &cfg))
    });
    g.finish();
}

criterion_group!(benches, closed_forms, optimizers, oracle);
criterion_main!(benches);
