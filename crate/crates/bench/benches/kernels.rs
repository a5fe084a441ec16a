use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayleigh_bench::instance;
use rayleigh_core::minorant::certify_admissibility;
use rayleigh_core::moments::{block_jacobian, fisher_information};
use rayleigh_core::specfun::{bessel_j, BesselOrder};
use rayleigh_core::torus::gen_hex_lattice;
use rayleigh_core::MinorantModel;

fn specfun(c: &mut Criterion) {
    let mut group = c.benchmark_group("bessel_j");
    for twice in [0, 1, 2, 3] {
        let order = BesselOrder::from_twice(twice).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(order.value()), &order, |b, &o| {
            b.iter(|| (1..=64).map(|i| bessel_j(o, black_box(0.25 * i as f64)).unwrap()).sum::<f64>())
        });
    }
    group.finish();
}

fn minorant(c: &mut Criterion) {
    let mut group = c.benchmark_group("minorant");
    for dim in [1, 2, 3] {
        let model = MinorantModel::new(dim, 0.2).unwrap();
        group.bench_with_input(BenchmarkId::new("psi_tau", dim), &model, |b, m| {
            b.iter(|| (0..128).map(|i| m.psi_tau(black_box(i as f64 / 128.0))).sum::<f64>())
        });
        group.bench_with_input(BenchmarkId::new("psi_hat_tau", dim), &model, |b, m| {
            b.iter(|| m.psi_hat_tau(black_box(0.3 * m.support_radius())).unwrap())
        });
    }
    let model = MinorantModel::new(2, 0.2).unwrap();
    group.sample_size(10);
    group.bench_function("certify_d2", |b| b.iter(|| certify_admissibility(&model, 100).unwrap()));
    group.finish();
}

fn moments(c: &mut Criterion) {
    let mut group = c.benchmark_group("sigma_min");
    group.sample_size(20);
    for (dim, n, count) in [(1, 64.0, 16), (2, 12.0, 12), (2, 20.0, 19)] {
        let (nodes, weights, indices) = instance(dim, n, 1.5, count);
        let id = format!("d{dim}_n{n}_s{count}");
        group.bench_function(BenchmarkId::new("block_jacobian", &id), |b| {
            b.iter(|| block_jacobian(&nodes, &weights, &indices).unwrap().sigma_min().unwrap())
        });
        group.bench_function(BenchmarkId::new("fim_eigen", &id), |b| {
            b.iter(|| fisher_information(&nodes, &weights, 0.1, &indices).unwrap().eigen().unwrap())
        });
    }
    group.finish();
}

fn torus(c: &mut Criterion) {
    c.bench_function("hex_lattice_91", |b| b.iter(|| gen_hex_lattice(black_box(0.05), 91).unwrap()));
}

criterion_group!(benches, specfun, minorant, moments, torus);
criterion_main!(benches);
