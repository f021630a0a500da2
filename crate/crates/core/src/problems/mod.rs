//! Benchmark functions, fixed-length template objectives and the PSO / GWO
//! baselines used for comparison runs.

mod baselines;
mod benchmarks;
mod template;

pub use baselines::{run_baseline, BaselineAlgorithm, BaselineConfig};
pub use benchmarks::{eval_benchmark, known_optimum, BenchmarkProblem, FunctionId, DEFAULT_DIM};
pub use template::FixedLengthTemplate;
