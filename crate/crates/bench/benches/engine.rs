use criterion::{criterion_group, criterion_main, Criterion};
use ddw_core::io::{synth_dataset, SynthParams};
use ddw_core::{
    run, run_baseline, BaselineAlgorithm, BaselineConfig, BenchmarkProblem, EngineConfig,
    FunctionId, Problem,
};

fn engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine");
    group.sample_size(10);

    let synth = synth_dataset(&SynthParams {
        n_cycles: 20,
        base_length: 40,
        ..SynthParams::default()
    })
    .unwrap();
    let cfg = EngineConfig {
        max_iterations: 5,
        ..EngineConfig::default()
    };
    group.bench_function("template_5_iterations", |b| {
        b.iter(|| run(Problem::Template(&synth.dataset), &cfg).unwrap())
    });

    let f14 = BenchmarkProblem::with_default_dim(FunctionId::new(14).unwrap());
    let cfg = EngineConfig {
        max_iterations: 50,
        ..EngineConfig::default()
    };
    group.bench_function("f14_50_iterations", |b| {
        b.iter(|| run(Problem::Blackbox(&f14), &cfg).unwrap())
    });

    let f1 = BenchmarkProblem::new(FunctionId::new(1).unwrap(), 10).unwrap();
    let pso = BaselineConfig {
        max_iterations: 50,
        ..BaselineConfig::new(BaselineAlgorithm::pso(), 0)
    };
    group.bench_function("pso_f1_50_iterations", |b| {
        b.iter(|| run_baseline(&pso, &f1, None).unwrap())
    });
    group.finish();
}

criterion_group!(benches, engine);
criterion_main!(benches);
