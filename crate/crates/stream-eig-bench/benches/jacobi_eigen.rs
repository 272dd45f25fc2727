//! Offline oracle cost: cyclic Jacobi on random symmetric matrices.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stream_eig::linalg::{sym_eigen, SymMat, DEFAULT_EIGEN_TOL};

fn bench_jacobi(c: &mut Criterion) {
    let mut group = c.benchmark_group("sym_eigen");
    for &d in &[10usize, 20, 40] {
        let mut rng = ChaCha8Rng::seed_from_u64(d as u64);
        let m = SymMat::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        group.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| {
            b.iter(|| sym_eigen(black_box(m), DEFAULT_EIGEN_TOL).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_jacobi);
criterion_main!(benches);
