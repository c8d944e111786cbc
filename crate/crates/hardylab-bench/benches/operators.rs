use criterion::{criterion_group, criterion_main, Criterion};
use hardylab_bench::{BENCH_ORDER, SMALL_ORDER};
use hardylab_core::compose::{c_matrix, gram_cstarc};
use hardylab_core::linalg::hermitian_eigen;
use hardylab_core::polar::rho_matrix;
use hardylab_core::subspace::{direct_rotation, eigenbasis, principal_angles, Parity};
use hardylab_core::DiskPoint;

fn half() -> DiskPoint {
    DiskPoint::from_re_im(0.5, 0.0).unwrap()
}

fn matrix_builds(c: &mut Criterion) {
    let a = half();
    c.bench_function("c_matrix_256", |b| b.iter(|| c_matrix(a, BENCH_ORDER)));
    c.bench_function("gram_cstarc_256", |b| b.iter(|| gram_cstarc(a, BENCH_ORDER)));
}

fn decompositions(c: &mut Criterion) {
    let a = half();
    let gram = gram_cstarc(a, BENCH_ORDER);
    let mut g = c.benchmark_group("decompositions");
    g.sample_size(10);
    g.bench_function("gram_eigen_256", |b| {
        b.iter(|| hermitian_eigen(&gram, 1e-8).unwrap())
    });
    g.bench_function("rho_matrix_128", |b| b.iter(|| rho_matrix(a, SMALL_ORDER).unwrap()));
    g.finish();
}

fn grassmannian(c: &mut Criterion) {
    let a = half();
    let ev = eigenbasis(DiskPoint::origin(), Parity::Even, SMALL_ORDER, 16).unwrap();
    let nm = eigenbasis(a, Parity::Even, SMALL_ORDER, 16).unwrap();
    let mut g = c.benchmark_group("grassmannian");
    g.sample_size(10);
    g.bench_function("principal_angles_128x16", |b| {
        b.iter(|| principal_angles(&ev, &nm).unwrap())
    });
    g.bench_function("direct_rotation_128x16", |b| {
        b.iter(|| direct_rotation(&ev, &nm).unwrap())
    });
    g.finish();
}

criterion_group!(benches, matrix_builds, decompositions, grassmannian);
criterion_main!(benches);
