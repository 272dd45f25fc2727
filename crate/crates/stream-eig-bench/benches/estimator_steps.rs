//! Per-step cost of the four update rules.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use stream_eig::{
    ccipca_step, init_state, krasulina_step_max, krasulina_step_min, oja_step, EstimatorState,
    ScheduleParams, Scheme,
};

fn gaussian_vec(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn setup(d: usize, scheme: Scheme) -> (EstimatorState, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let state = init_state(d, scheme, &mut rng, 2.0);
    let x = gaussian_vec(d, &mut rng);
    (state, x)
}

fn bench_steps(c: &mut Criterion) {
    let schedule = ScheduleParams::default();
    let mut group = c.benchmark_group("step");
    for &d in &[10usize, 100] {
        group.bench_with_input(BenchmarkId::new("krasulina_min", d), &d, |b, &d| {
            let (state, x) = setup(d, Scheme::KrasulinaMin);
            b.iter_batched(
                || state.clone(),
                |s| krasulina_step_min(s, black_box(&x), &schedule).unwrap(),
                criterion::BatchSize::SmallInput,
            )
        });
        group.bench_with_input(BenchmarkId::new("krasulina_max", d), &d, |b, &d| {
            let (state, x) = setup(d, Scheme::KrasulinaMax);
            b.iter_batched(
                || state.clone(),
                |s| krasulina_step_max(s, black_box(&x), &schedule).unwrap(),
                criterion::BatchSize::SmallInput,
            )
        });
        group.bench_with_input(BenchmarkId::new("oja", d), &d, |b, &d| {
            let (state, x) = setup(d, Scheme::Oja);
            b.iter_batched(
                || state.clone(),
                |s| oja_step(s, black_box(&x), &schedule).unwrap(),
                criterion::BatchSize::SmallInput,
            )
        });
        group.bench_with_input(BenchmarkId::new("ccipca", d), &d, |b, &d| {
            let (state, x) = setup(d, Scheme::Ccipca);
            b.iter_batched(
                || state.clone(),
                |s| ccipca_step(s, black_box(&x)).unwrap(),
                criterion::BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, bench_steps);
criterion_main!(benches);
