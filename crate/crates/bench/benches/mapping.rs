use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ddw_core::io::{synth_dataset, SynthParams};
use ddw_core::{map_series, template_fitness, template_fitness_value, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn series(rng: &mut ChaCha8Rng, len: usize) -> Series {
    Series::new((0..len).map(|_| rng.gen_range(-40.0..40.0)).collect()).unwrap()
}

fn mapping(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("map_series");
    for (la, lb) in [(60, 60), (60, 61), (120, 118)] {
        let a = series(&mut rng, la);
        let b = series(&mut rng, lb);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{la}x{lb}")), &(a, b), |bench, (a, b)| {
            bench.iter(|| map_series(black_box(a), black_box(b)))
        });
    }
    group.finish();
}

fn fitness(c: &mut Criterion) {
    let synth = synth_dataset(&SynthParams::default()).unwrap();
    let mut group = c.benchmark_group("template_fitness");
    group.bench_function("full_report", |b| {
        b.iter(|| template_fitness(black_box(&synth.planted), &synth.dataset).unwrap())
    });
    group.bench_function("value_only", |b| {
        b.iter(|| template_fitness_value(black_box(&synth.planted), &synth.dataset).unwrap())
    });
    group.finish();
}

criterion_group!(benches, mapping, fitness);
criterion_main!(benches);
