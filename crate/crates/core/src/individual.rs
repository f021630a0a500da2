//! Candidate templates, series resizing and population initialization.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{ChannelBounds, DimRange, ReferenceDataset};
use crate::error::{DdwError, Result};
use crate::fitness::FitnessReport;
use crate::rng::{substream, DdwRng, Stream};
use crate::series::Series;

/// A multichannel candidate whose channels may have different lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub channels: BTreeMap<String, Series>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitness: Option<FitnessReport>,
}

impl Individual {
    pub fn new(channels: BTreeMap<String, Series>) -> Self {
        Individual {
            channels,
            fitness: None,
        }
    }

    /// Single-channel individual, the shape used by fixed-dimension problems.
    pub fn single(name: &str, series: Series) -> Self {
        let mut channels = BTreeMap::new();
        channels.insert(name.to_string(), series);
        Individual::new(channels)
    }

    pub fn channel(&self, name: &str) -> Option<&Series> {
        self.channels.get(name)
    }

    pub fn fitness_value(&self) -> Option<f64> {
        self.fitness.as_ref().map(|f| f.fitness)
    }

    /// Fitness, treating an unevaluated individual as an invalid state.
    pub fn require_fitness(&self) -> Result<f64> {
        self.fitness_value()
            .ok_or_else(|| DdwError::InvalidState("individual has not been evaluated".into()))
    }

    pub fn quality(&self, channel: &str) -> Option<&[f64]> {
        self.fitness
            .as_ref()
            .and_then(|f| f.per_dim_quality.get(channel))
            .map(Vec::as_slice)
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.channels.values().map(|s| s.len())
    }
}

/// How elements are chosen when a series is shrunk or grown.
#[derive(Debug, Clone, Copy)]
pub enum ResizeMode<'a> {
    /// Uniformly random positions.
    Random,
    /// Around the position with the largest quality value (worst fit).
    Worst(&'a [f64]),
}

/// Deletes or interpolates elements one at a time until `s` has `target`
/// elements. Inserted elements are midpoints of their two neighbors.
pub fn resize_series<R: Rng + ?Sized>(
    s: &Series,
    target: usize,
    range: DimRange,
    mode: ResizeMode<'_>,
    rng: &mut R,
) -> Result<Series> {
    if !range.contains(target) {
        return Err(DdwError::InvalidInput(format!(
            "target length {target} outside [{}, {}]",
            range.min, range.max
        )));
    }
    let mut values = s.values().to_vec();
    match mode {
        ResizeMode::Random => {
            while values.len() > target {
                let k = rng.gen_range(0..values.len());
                values.remove(k);
            }
            while values.len() < target {
                if values.len() == 1 {
                    values.push(values[0]);
                    continue;
                }
                let k = rng.gen_range(0..values.len() - 1);
                let mid = 0.5 * (values[k] + values[k + 1]);
                values.insert(k + 1, mid);
            }
        }
        ResizeMode::Worst(quality) => {
            if quality.len() != values.len() {
                return Err(DdwError::InvalidInput(format!(
                    "quality has {} entries for a series of length {}",
                    quality.len(),
                    values.len()
                )));
            }
            let mut quality = quality.to_vec();
            while values.len() > target {
                let w = argmax(&quality);
                values.remove(w);
                quality.remove(w);
            }
            while values.len() < target {
                let w = argmax(&quality);
                let at = if w + 1 < values.len() {
                    w + 1
                } else if w > 0 {
                    w
                } else {
                    values.push(values[0]);
                    quality.push(quality[0]);
                    continue;
                };
                values.insert(at, 0.5 * (values[at - 1] + values[at]));
                quality.insert(at, 0.5 * (quality[at - 1] + quality[at]));
            }
        }
    }
    Ok(Series::from_vec_unchecked(values))
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Average reference plus a zero-mean uniform perturbation of half-width
/// `(env_max - env_min) / 2` per position, clamped to the global range.
pub(crate) fn perturbed_reference<R: Rng + ?Sized>(
    average: &Series,
    bounds: &ChannelBounds,
    rng: &mut R,
) -> Series {
    let values = average
        .iter()
        .enumerate()
        .map(|(i, &mean)| {
            let half = 0.5 * (bounds.env_max[i] - bounds.env_min[i]);
            let delta = if half > 0.0 {
                rng.gen_range(-half..=half)
            } else {
                0.0
            };
            bounds.clamp(i, mean + delta)
        })
        .collect();
    Series::from_vec_unchecked(values)
}

/// Builds `m` individuals around the modal-length average of the dataset.
/// Each channel gets its own length drawn uniformly from the dataset's range.
pub fn init_population(dataset: &ReferenceDataset, m: usize, seed: u64) -> Result<Vec<Individual>> {
    if m < 4 {
        return Err(DdwError::Config(format!(
            "population size {m} is below the minimum of 4"
        )));
    }
    let range = dataset.dim_range();
    let prepared: Vec<(String, Series, ChannelBounds)> = dataset
        .channel_names()
        .iter()
        .map(|name| {
            Ok((
                name.clone(),
                dataset.average_reference(name)?,
                dataset.channel_bounds(name)?,
            ))
        })
        .collect::<Result<_>>()?;

    (0..m)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, Stream::Init, 0, k as u64);
            init_individual(&prepared, range, &mut rng)
        })
        .collect()
}

fn init_individual(
    prepared: &[(String, Series, ChannelBounds)],
    range: DimRange,
    rng: &mut DdwRng,
) -> Result<Individual> {
    let mut channels = BTreeMap::new();
    for (name, avg, bounds) in prepared {
        let base = perturbed_reference(avg, bounds, rng);
        let len = rng.gen_range(range.min..=range.max);
        let s = resize_series(&base, len, range, ResizeMode::Random, rng)?;
        channels.insert(name.clone(), s);
    }
    Ok(Individual::new(channels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures::single_channel;
    use crate::dataset::Cycle;
    use rand::SeedableRng;

    fn s(v: &[f64]) -> Series {
        Series::new(v.to_vec()).unwrap()
    }

    fn rng() -> DdwRng {
        DdwRng::seed_from_u64(11)
    }

    #[test]
    fn random_shrink_is_a_single_deletion() {
        let range = DimRange::new(1, 5).unwrap();
        let allowed = [vec![2.0, 4.0], vec![0.0, 4.0], vec![0.0, 2.0]];
        let mut seen = std::collections::BTreeSet::new();
        let mut r = rng();
        for _ in 0..200 {
            let out = resize_series(&s(&[0.0, 2.0, 4.0]), 2, range, ResizeMode::Random, &mut r)
                .unwrap()
                .into_vec();
            let pos = allowed.iter().position(|a| *a == out).expect("not a single deletion");
            seen.insert(pos);
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn random_grow_inserts_midpoint() {
        let range = DimRange::new(1, 5).unwrap();
        let out = resize_series(&s(&[0.0, 2.0]), 3, range, ResizeMode::Random, &mut rng()).unwrap();
        assert_eq!(out.values(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn worst_mode_deletes_highest_quality() {
        let range = DimRange::new(1, 5).unwrap();
        let q = [0.0, 9.0, 0.0];
        let out = resize_series(&s(&[0.0, 2.0, 4.0]), 2, range, ResizeMode::Worst(&q), &mut rng())
            .unwrap();
        assert_eq!(out.values(), &[0.0, 4.0]);
    }

    #[test]
    fn worst_mode_grows_next_to_worst() {
        let range = DimRange::new(1, 6).unwrap();
        let q = [0.0, 0.0, 5.0, 1.0];
        let out = resize_series(
            &s(&[0.0, 2.0, 4.0, 8.0]),
            5,
            range,
            ResizeMode::Worst(&q),
            &mut rng(),
        )
        .unwrap();
        assert_eq!(out.values(), &[0.0, 2.0, 4.0, 6.0, 8.0]);

        // Worst at the end: interpolate with the left neighbour.
        let q = [0.0, 3.0];
        let out =
            resize_series(&s(&[0.0, 2.0]), 3, range, ResizeMode::Worst(&q), &mut rng()).unwrap();
        assert_eq!(out.values(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn resize_errors() {
        let range = DimRange::new(2, 4).unwrap();
        let x = s(&[0.0, 1.0, 2.0]);
        assert!(resize_series(&x, 5, range, ResizeMode::Random, &mut rng()).is_err());
        assert!(resize_series(&x, 1, range, ResizeMode::Random, &mut rng()).is_err());
        assert!(resize_series(&x, 2, range, ResizeMode::Worst(&[1.0]), &mut rng()).is_err());
    }

    #[test]
    fn singleton_grows_by_repetition() {
        let range = DimRange::new(1, 3).unwrap();
        let out = resize_series(&s(&[4.0]), 3, range, ResizeMode::Random, &mut rng()).unwrap();
        assert_eq!(out.values(), &[4.0, 4.0, 4.0]);
    }

    #[test]
    fn population_floor() {
        let d = single_channel(&[&[0.0, 1.0]]);
        assert!(matches!(init_population(&d, 3, 0), Err(DdwError::Config(_))));
    }

    #[test]
    fn zero_width_envelope_reproduces_reference() {
        let d = single_channel(&[&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]]);
        let pop = init_population(&d, 6, 5).unwrap();
        for ind in pop {
            assert_eq!(ind.channel("x").unwrap().values(), &[1.0, 2.0, 3.0]);
        }
    }

    #[test]
    fn lengths_and_values_within_ranges() {
        let mut cycles = Vec::new();
        for (id, len) in [59usize, 60, 60, 61, 60, 59].into_iter().enumerate() {
            let mut m = BTreeMap::new();
            for (k, name) in ["a", "b"].iter().enumerate() {
                let v = (0..len)
                    .map(|i| ((i + id) as f64 * 0.3).sin() * 10.0 + k as f64)
                    .collect();
                m.insert(name.to_string(), Series::new(v).unwrap());
            }
            cycles.push(Cycle::new(id as i64, m).unwrap());
        }
        let d = ReferenceDataset::new(vec!["a".into(), "b".into()], cycles).unwrap();
        let bounds = d.bounds().unwrap();
        let pop = init_population(&d, 30, 99).unwrap();
        assert_eq!(pop.len(), 30);
        for ind in &pop {
            for (name, s) in &ind.channels {
                assert!((59..=61).contains(&s.len()));
                let b = &bounds[name];
                assert!(s.iter().all(|&v| b.global_min <= v && v <= b.global_max));
            }
        }
        assert_eq!(pop, init_population(&d, 30, 99).unwrap());
        assert_ne!(pop, init_population(&d, 30, 100).unwrap());
    }
}
