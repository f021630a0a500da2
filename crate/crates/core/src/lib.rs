//! Dynamic Dimension Wrapping: a population metaheuristic that searches over
//! variable-length multichannel templates, scored against reference cycles
//! through dynamic time warping. The same engine also runs on fixed-dimension
//! scalar objectives, with PSO and GWO baselines for comparison.
//!
//! ```no_run
//! use ddw_core::{io, run, EngineConfig, Problem};
//!
//! let synth = io::synth_dataset(&io::SynthParams::default()).unwrap();
//! let config = EngineConfig { max_iterations: 50, ..EngineConfig::default() };
//! let record = run(Problem::Template(&synth.dataset), &config).unwrap();
//! println!("best fitness {}", record.final_fitness());
//! ```

pub mod dataset;
pub mod engine;
pub mod error;
pub mod fitness;
pub mod individual;
pub mod io;
pub mod odc;
pub mod problems;
pub mod record;
pub mod rng;
pub mod series;
pub mod strategies;

#[cfg(test)]
mod proptests;

pub use dataset::{ChannelBounds, Cycle, DimRange, ReferenceDataset, SearchBounds};
pub use engine::{partition_sizes, run, EngineConfig, Problem};
pub use error::{DdwError, Result};
pub use fitness::{
    blackbox_fitness, template_fitness, template_fitness_value, FitnessReport, Objective,
    BLACKBOX_CHANNEL,
};
pub use individual::{init_population, resize_series, Individual, ResizeMode};
pub use odc::{classify, odc_collect, odc_merge, odc_merge_traced, odc_probe_blackbox, MergeChoice, OdcClass};
pub use problems::{run_baseline, BaselineAlgorithm, BaselineConfig, BenchmarkProblem, FunctionId};
pub use record::{ConfigEcho, IterationStats, OdcCounts, RunRecord};
pub use series::{dtw_best_route, map_series, MappingResult, Series};
pub use strategies::{strategy_a, strategy_b, strategy_c, LevyParams};
