use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use holoqc::geometry::{berry_holonomy, entanglement_measure, StateLoop};
use holoqc::torus::{integrate_flow, FlowSpec, TorusPoint};
use holoqc::{run_circuit_holo, run_circuit_matrix, Pauli, StateVector};
use holoqc_bench::{random_input, workload};

fn circuits(c: &mut Criterion) {
    let mut group = c.benchmark_group("circuit depth 30");
    for n in [2, 4, 6] {
        let (circuit, state) = workload(n, 30);
        let vector = StateVector::from_holo(&state);
        group.bench_with_input(BenchmarkId::new("holomorphic", n), &n, |b, _| {
            b.iter(|| run_circuit_holo(black_box(&circuit), black_box(&state)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("state vector", n), &n, |b, _| {
            b.iter(|| run_circuit_matrix(black_box(&circuit), black_box(&vector)).unwrap())
        });
    }
    group.finish();
}

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("entanglement measure");
    for n in [2, 3, 4] {
        let s = random_input(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| entanglement_measure(black_box(&s)).unwrap())
        });
    }
    group.finish();

    let lp = StateLoop::bloch_circle(1.0, 2000).unwrap();
    c.bench_function("holonomy M=2000", |b| {
        b.iter(|| berry_holonomy(black_box(&lp)).unwrap())
    });
}

fn flows(c: &mut Criterion) {
    let start = TorusPoint::pair(0.3, 1.1).unwrap();
    let spec = FlowSpec::new(Pauli::X, 1, 10.0, 1e-3).unwrap();
    c.bench_function("X flow t=10 dt=1e-3", |b| {
        b.iter(|| integrate_flow(black_box(&spec), black_box(&start)).unwrap())
    });
}

criterion_group!(benches, circuits, geometry, flows);
criterion_main!(benches);
