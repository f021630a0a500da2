//! Run output shared by the DDW engine and the baseline optimizers.

use serde::{Deserialize, Serialize};

use crate::engine::EngineConfig;
use crate::individual::Individual;
use crate::odc::OdcClass;
use crate::problems::BaselineConfig;

/// Configuration that produced a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConfigEcho {
    Ddw(EngineConfig),
    Baseline(BaselineConfig),
}

/// Population statistics after one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub iteration: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub std_fitness: f64,
    pub population_size: usize,
    /// Shortest and longest channel over the whole population.
    pub min_len: usize,
    pub max_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odc: Option<OdcClass>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdcCounts {
    pub best: usize,
    pub better: usize,
    pub worst: usize,
}

impl OdcCounts {
    pub fn add(&mut self, class: OdcClass) {
        match class {
            OdcClass::Best => self.best += 1,
            OdcClass::Better => self.better += 1,
            OdcClass::Worst => self.worst += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.best + self.better + self.worst
    }

    /// Share of iterations where the collected solution beat at least one
    /// elite member.
    pub fn improving_rate(&self) -> f64 {
        if self.total() == 0 {
            return 0.0;
        }
        (self.best + self.better) as f64 / self.total() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub problem: String,
    pub seed: u64,
    pub config: ConfigEcho,
    pub history: Vec<IterationStats>,
    pub final_best: Individual,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odc: Option<OdcCounts>,
    pub wall_time_secs: f64,
}

impl RunRecord {
    pub fn final_fitness(&self) -> f64 {
        self.final_best.fitness_value().unwrap_or(f64::INFINITY)
    }

    /// Copy with the wall-clock field zeroed, for reproducibility checks.
    pub fn without_wall_time(&self) -> RunRecord {
        RunRecord {
            wall_time_secs: 0.0,
            ..self.clone()
        }
    }

    pub fn best_so_far_is_monotone(&self) -> bool {
        self.history
            .windows(2)
            .all(|w| w[1].best_fitness <= w[0].best_fitness)
    }
}

/// Mean, and population standard deviation.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
