//! Parallel-vs-sequential benchmarks for the sample sweeps.
//!
//! The property suites and batch evolutions are data-parallel over
//! independent samples; these benches measure what the rayon fan-out buys
//! over the sequential fallback on the same workload.
//!
//! Run with `cargo bench -p geomq-core`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geomq_core::checks::{run_mu, CheckConfig};
use geomq_core::density::DensityMatrix;
use geomq_core::hermitian::gkls_basis;
use geomq_core::lindblad::{diagonalize, evolve, evolve_batch, GKLSSpec};
use geomq_core::sampling::{random_density, random_hermitian, random_kossakowski, seeded_rng};
use geomq_core::CMat;

fn bench_mu_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("mu_relatedness_suite");
    for &samples in &[200usize, 800] {
        let base = CheckConfig {
            n: 3,
            samples,
            seed: 7,
            perturb: 0.0,
            tol_scale: 1.0,
            parallel: true,
        };
        group.bench_with_input(
            BenchmarkId::new("parallel", samples),
            &base,
            |b, cfg| b.iter(|| run_mu(cfg).unwrap()),
        );
        let seq = CheckConfig {
            parallel: false,
            ..base.clone()
        };
        group.bench_with_input(
            BenchmarkId::new("sequential", samples),
            &seq,
            |b, cfg| b.iter(|| run_mu(cfg).unwrap()),
        );
    }
    group.finish();
}

fn bench_batch_evolution(c: &mut Criterion) {
    let mut rng = seeded_rng(99);
    let n = 2;
    let basis: Vec<CMat> = gkls_basis(n).into_iter().map(|b| b.into_matrix()).collect();
    let spec = GKLSSpec::new(
        random_hermitian(&mut rng, n),
        random_kossakowski(&mut rng, n),
        basis,
    )
    .unwrap();
    let d = diagonalize(&spec).unwrap();
    let states: Vec<DensityMatrix> = (0..32)
        .map(|_| DensityMatrix::from_matrix(random_density(&mut rng, n, n)).unwrap())
        .collect();

    let mut group = c.benchmark_group("gkls_batch_evolution");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| evolve_batch(&d, &states, 1.0, 1e-3, false))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            states
                .iter()
                .map(|rho0| evolve(&d, rho0, 1.0, 1e-3, false))
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_mu_suite, bench_batch_evolution);
criterion_main!(benches);
