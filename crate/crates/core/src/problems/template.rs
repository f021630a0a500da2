use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::dataset::{ChannelBounds, DimRange, ReferenceDataset};
use crate::error::{DdwError, Result};
use crate::fitness::{template_fitness, template_fitness_value, Objective};
use crate::individual::{perturbed_reference, resize_series, Individual, ResizeMode};
use crate::rng::{substream, Stream};
use crate::series::Series;

/// Template fitting restricted to one common length for every channel, so
/// fixed-dimension optimizers can work on it. Channels are concatenated in
/// dataset order.
pub struct FixedLengthTemplate<'a> {
    dataset: &'a ReferenceDataset,
    length: usize,
    bounds: Vec<ChannelBounds>,
}

impl<'a> FixedLengthTemplate<'a> {
    pub fn new(dataset: &'a ReferenceDataset, length: usize) -> Result<Self> {
        if !dataset.dim_range().contains(length) {
            return Err(DdwError::InvalidInput(format!(
                "length {length} outside the dataset range [{}, {}]",
                dataset.dim_range().min,
                dataset.dim_range().max
            )));
        }
        let bounds = dataset
            .channel_names()
            .iter()
            .map(|n| dataset.channel_bounds(n))
            .collect::<Result<_>>()?;
        Ok(FixedLengthTemplate {
            dataset,
            length,
            bounds,
        })
    }

    /// At the modal cycle length.
    pub fn modal(dataset: &'a ReferenceDataset) -> Result<Self> {
        FixedLengthTemplate::new(dataset, dataset.modal_dimension().0)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    fn split(&self, x: &[f64]) -> Result<Individual> {
        let mut channels = BTreeMap::new();
        for (name, chunk) in self.dataset.channel_names().iter().zip(x.chunks(self.length)) {
            channels.insert(name.clone(), Series::new(chunk.to_vec())?);
        }
        Ok(Individual::new(channels))
    }

    /// Starting points built like the DDW initializer, but with every channel
    /// at the fixed length.
    pub fn initial_positions(&self, m: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        let range = DimRange::new(self.length, self.length)?;
        let averages: Vec<Series> = self
            .dataset
            .channel_names()
            .iter()
            .map(|n| self.dataset.average_reference(n))
            .collect::<Result<_>>()?;
        (0..m)
            .into_par_iter()
            .map(|k| {
                let mut rng = substream(seed, Stream::Init, 0, k as u64);
                let mut x = Vec::with_capacity(self.dimension());
                for (avg, b) in averages.iter().zip(&self.bounds) {
                    let base = perturbed_reference(avg, b, &mut rng);
                    let s = resize_series(&base, self.length, range, ResizeMode::Random, &mut rng)?;
                    x.extend_from_slice(&s);
                }
                Ok(x)
            })
            .collect()
    }
}

impl Objective for FixedLengthTemplate<'_> {
    fn dimension(&self) -> usize {
        self.length * self.bounds.len()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        match self.split(x) {
            Ok(ind) => template_fitness_value(&ind, self.dataset).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    }

    fn lower_bounds(&self) -> Vec<f64> {
        self.bounds
            .iter()
            .flat_map(|b| std::iter::repeat(b.global_min).take(self.length))
            .collect()
    }

    fn upper_bounds(&self) -> Vec<f64> {
        self.bounds
            .iter()
            .flat_map(|b| std::iter::repeat(b.global_max).take(self.length))
            .collect()
    }

    fn name(&self) -> String {
        format!("template@{}", self.length)
    }

    fn channel_lengths(&self) -> Vec<usize> {
        vec![self.length; self.bounds.len()]
    }

    fn to_individual(&self, x: &[f64]) -> Result<Individual> {
        let mut ind = self.split(x)?;
        ind.fitness = Some(template_fitness(&ind, self.dataset)?);
        Ok(ind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures::single_channel;

    #[test]
    fn flat_round_trip() {
        let d = single_channel(&[&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0], &[0.0, 2.0]]);
        let obj = FixedLengthTemplate::modal(&d).unwrap();
        assert_eq!(obj.length(), 3);
        assert_eq!(obj.dimension(), 3);
        let ind = obj.to_individual(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(ind.channel("x").unwrap().values(), &[0.0, 1.0, 2.0]);
        assert_eq!(ind.fitness_value(), Some(obj.evaluate(&[0.0, 1.0, 2.0])));
        let starts = obj.initial_positions(5, 1).unwrap();
        assert!(starts.iter().all(|s| s.len() == 3));
        assert!(FixedLengthTemplate::new(&d, 4).is_err());
    }

    #[test]
    fn baseline_stats_report_channel_lengths() {
        use crate::problems::{run_baseline, BaselineAlgorithm, BaselineConfig};
        let d = crate::io::synth_dataset(&crate::io::SynthParams {
            n_cycles: 4,
            channels: vec!["a".into(), "b".into()],
            base_length: 8,
            length_jitter: 0,
            ..Default::default()
        })
        .unwrap()
        .dataset;
        let obj = FixedLengthTemplate::modal(&d).unwrap();
        assert_eq!(obj.channel_lengths(), vec![8, 8]);
        let cfg = BaselineConfig {
            population_size: 5,
            max_iterations: 2,
            ..BaselineConfig::new(BaselineAlgorithm::gwo(), 0)
        };
        let rec = run_baseline(&cfg, &obj, Some(obj.initial_positions(5, 0).unwrap())).unwrap();
        assert!(rec.history.iter().all(|s| (s.min_len, s.max_len) == (8, 8)));
    }
}
