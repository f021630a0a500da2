//! Fitness of an individual against reference cycles or a scalar objective.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::ReferenceDataset;
use crate::error::{DdwError, Result};
use crate::individual::Individual;
use crate::series::{map_slices, map_total};

/// Channel name used by single-channel, fixed-dimension problems.
pub const BLACKBOX_CHANNEL: &str = "x";

/// Fitness plus the cached per-position quality values used by ODC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub fitness: f64,
    /// Mean over reference cycles of the per-position minimum distances.
    /// Empty for scalar objectives.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_dim_quality: BTreeMap<String, Vec<f64>>,
}

/// A scalar function over a fixed-length real vector, minimized.
pub trait Objective: Send + Sync {
    fn dimension(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> f64;
    fn lower_bounds(&self) -> Vec<f64>;
    fn upper_bounds(&self) -> Vec<f64>;

    fn name(&self) -> String {
        "objective".to_string()
    }

    /// Length of each channel of [`Objective::to_individual`]'s output.
    fn channel_lengths(&self) -> Vec<usize> {
        vec![self.dimension()]
    }

    /// Packs a flat point back into an individual.
    fn to_individual(&self, x: &[f64]) -> Result<Individual> {
        Ok(Individual::single(
            BLACKBOX_CHANNEL,
            crate::series::Series::new(x.to_vec())?,
        ))
    }
}

fn check_template_shape(x: &Individual, dataset: &ReferenceDataset) -> Result<()> {
    let names = dataset.channel_names();
    if x.channels.len() != names.len() || names.iter().any(|n| !x.channels.contains_key(n)) {
        let got: Vec<&String> = x.channels.keys().collect();
        return Err(DdwError::InvalidInput(format!(
            "individual channels {got:?} do not match dataset channels {names:?}"
        )));
    }
    let range = dataset.dim_range();
    for (name, s) in &x.channels {
        if !range.contains(s.len()) {
            return Err(DdwError::InvalidInput(format!(
                "channel '{name}' has length {} outside [{}, {}]",
                s.len(),
                range.min,
                range.max
            )));
        }
    }
    Ok(())
}

/// Mean over cycles of the mean over channels of the mapping distance, with
/// per-position quality averaged over cycles.
pub fn template_fitness(x: &Individual, dataset: &ReferenceDataset) -> Result<FitnessReport> {
    check_template_shape(x, dataset)?;
    let cycles = dataset.cycles();
    let n = cycles.len() as f64;
    let n_channels = x.channels.len() as f64;

    let mut quality: BTreeMap<String, Vec<f64>> = x
        .channels
        .iter()
        .map(|(name, s)| (name.clone(), vec![0.0; s.len()]))
        .collect();
    let mut sum = 0.0;
    for cycle in cycles {
        let mut per_cycle = 0.0;
        for (name, s) in &x.channels {
            let reference = cycle.channel(name).expect("validated channel set");
            let m = map_slices(s, reference);
            per_cycle += m.total;
            let q = quality.get_mut(name).expect("initialized above");
            for (acc, v) in q.iter_mut().zip(&m.per_dim) {
                *acc += v;
            }
        }
        sum += per_cycle / n_channels;
    }
    for q in quality.values_mut() {
        for v in q.iter_mut() {
            *v /= n;
        }
    }
    Ok(FitnessReport {
        fitness: sum / n,
        per_dim_quality: quality,
    })
}

/// Fitness value only; skips route extraction.
pub fn template_fitness_value(x: &Individual, dataset: &ReferenceDataset) -> Result<f64> {
    check_template_shape(x, dataset)?;
    let cycles = dataset.cycles();
    let n_channels = x.channels.len() as f64;
    let sum: f64 = cycles
        .iter()
        .map(|cycle| {
            x.channels
                .iter()
                .map(|(name, s)| map_total(s, cycle.channel(name).expect("validated")))
                .sum::<f64>()
                / n_channels
        })
        .sum();
    Ok(sum / cycles.len() as f64)
}

/// Objective value of a single-channel individual.
pub fn blackbox_fitness(x: &Individual, objective: &dyn Objective) -> Result<FitnessReport> {
    let values = match (x.channels.len(), x.channels.values().next()) {
        (1, Some(s)) => s,
        _ => {
            return Err(DdwError::InvalidInput(format!(
                "scalar objectives need exactly one channel, got {}",
                x.channels.len()
            )))
        }
    };
    if values.len() != objective.dimension() {
        return Err(DdwError::InvalidInput(format!(
            "objective expects dimension {}, got {}",
            objective.dimension(),
            values.len()
        )));
    }
    let fitness = objective.evaluate(values);
    if !fitness.is_finite() {
        return Err(DdwError::InvalidInput(format!(
            "objective returned non-finite value {fitness}"
        )));
    }
    Ok(FitnessReport {
        fitness,
        per_dim_quality: BTreeMap::new(),
    })
}
