//! Synthetic gait cycles around planted periodic templates.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{Cycle, ReferenceDataset};
use crate::error::{DdwError, Result};
use crate::individual::Individual;
use crate::rng::{substream, Stream};
use crate::series::Series;

/// Back, thighs and shanks.
pub const DEFAULT_CHANNELS: [&str; 5] = ["back", "l_thigh", "r_thigh", "l_shank", "r_shank"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n_cycles: usize,
    pub channels: Vec<String>,
    pub base_length: usize,
    /// Cycle lengths vary uniformly within `base_length ± length_jitter`.
    pub length_jitter: usize,
    /// Standard deviation of the additive Gaussian noise, in degrees.
    pub noise_sd: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            n_cycles: 80,
            channels: DEFAULT_CHANNELS.iter().map(|s| s.to_string()).collect(),
            base_length: 60,
            length_jitter: 1,
            noise_sd: 2.0,
            seed: 0,
        }
    }
}

impl SynthParams {
    fn validate(&self) -> Result<()> {
        if self.n_cycles == 0 {
            return Err(DdwError::Config("n_cycles must be positive".into()));
        }
        if self.base_length < self.length_jitter + 2 {
            return Err(DdwError::Config(format!(
                "base_length {} minus jitter {} must be at least 2",
                self.base_length, self.length_jitter
            )));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(DdwError::Config(format!("noise_sd {} must be >= 0", self.noise_sd)));
        }
        let unique: BTreeSet<&String> = self.channels.iter().collect();
        if self.channels.is_empty() || unique.len() != self.channels.len() {
            return Err(DdwError::Config("channel labels must be nonempty and unique".into()));
        }
        if self.channels.iter().any(|c| c.is_empty() || c.contains(',')) {
            return Err(DdwError::Config("channel labels must be nonempty and comma-free".into()));
        }
        Ok(())
    }
}

/// Dataset plus the templates its cycles were drawn from.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub dataset: ReferenceDataset,
    /// The noiseless templates sampled at `base_length`.
    pub planted: Individual,
}

/// Two-harmonic waveform for channel `k`, evaluated at phase `t` in [0, 1).
fn waveform(k: usize, t: f64) -> f64 {
    let k = k as f64;
    let offset = 5.0 * k - 10.0;
    let a1 = 10.0 + 8.0 * k;
    let a2 = 0.4 * a1;
    let phase = 0.7 * k;
    offset + a1 * (2.0 * PI * t + phase).sin() + a2 * (4.0 * PI * t + 2.0 * phase + 0.5).sin()
}

fn sample(k: usize, len: usize) -> Vec<f64> {
    (0..len).map(|i| waveform(k, i as f64 / len as f64)).collect()
}

pub fn synth_dataset(params: &SynthParams) -> Result<SynthOutput> {
    params.validate()?;
    let noise = Normal::new(0.0, params.noise_sd)
        .map_err(|e| DdwError::Config(format!("bad noise level: {e}")))?;

    let mut cycles = Vec::with_capacity(params.n_cycles);
    for j in 0..params.n_cycles {
        let mut rng = substream(params.seed, Stream::Synth, 0, j as u64);
        let jitter = params.length_jitter as i64;
        let len = (params.base_length as i64 + rng.gen_range(-jitter..=jitter)) as usize;
        let mut channels = BTreeMap::new();
        for (k, name) in params.channels.iter().enumerate() {
            let values = sample(k, len)
                .into_iter()
                .map(|v| v + noise.sample(&mut rng))
                .collect();
            channels.insert(name.clone(), Series::new(values)?);
        }
        cycles.push(Cycle::new(j as i64, channels)?);
    }
    let dataset = ReferenceDataset::new(params.channels.clone(), cycles)?;

    let planted = Individual::new(
        params
            .channels
            .iter()
            .enumerate()
            .map(|(k, name)| Ok((name.clone(), Series::new(sample(k, params.base_length))?)))
            .collect::<Result<_>>()?,
    );
    Ok(SynthOutput { dataset, planted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::template_fitness;

    #[test]
    fn noiseless_fixed_length_matches_template() {
        let p = SynthParams {
            n_cycles: 5,
            length_jitter: 0,
            noise_sd: 0.0,
            ..SynthParams::default()
        };
        let out = synth_dataset(&p).unwrap();
        let first = &out.dataset.cycles()[0];
        assert!(out.dataset.cycles().iter().all(|c| c == &Cycle::new(c.id, first.channels().clone()).unwrap()
            && c.channels() == first.channels()));
        assert_eq!(template_fitness(&out.planted, &out.dataset).unwrap().fitness, 0.0);
    }

    #[test]
    fn jitter_only_is_small_but_positive() {
        let p = SynthParams {
            n_cycles: 20,
            noise_sd: 0.0,
            ..SynthParams::default()
        };
        let out = synth_dataset(&p).unwrap();
        let f = template_fitness(&out.planted, &out.dataset).unwrap().fitness;
        assert!(f > 0.0);
        // Far below what a single degree of misalignment everywhere would cost.
        assert!(f < 60.0, "{f}");
    }

    #[test]
    fn lengths_follow_jitter() {
        let out = synth_dataset(&SynthParams::default()).unwrap();
        let lens: BTreeSet<usize> = out.dataset.cycles().iter().map(|c| c.len()).collect();
        assert!(lens.iter().all(|l| (59..=61).contains(l)));
        assert_eq!(out.dataset.cycles().len(), 80);
        assert_eq!(out.dataset.channel_names().len(), 5);
    }

    #[test]
    fn seeded() {
        let a = synth_dataset(&SynthParams::default()).unwrap();
        let b = synth_dataset(&SynthParams::default()).unwrap();
        assert_eq!(a.dataset, b.dataset);
        let c = synth_dataset(&SynthParams { seed: 1, ..SynthParams::default() }).unwrap();
        assert_ne!(a.dataset, c.dataset);
    }

    #[test]
    fn invalid_params() {
        for p in [
            SynthParams { base_length: 2, length_jitter: 1, ..SynthParams::default() },
            SynthParams { noise_sd: -1.0, ..SynthParams::default() },
            SynthParams { n_cycles: 0, ..SynthParams::default() },
            SynthParams { channels: vec![], ..SynthParams::default() },
            SynthParams { channels: vec!["a".into(), "a".into()], ..SynthParams::default() },
        ] {
            assert!(matches!(synth_dataset(&p), Err(DdwError::Config(_))));
        }
    }
}
