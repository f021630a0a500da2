//! Reference gait cycles and the statistics derived from them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{DdwError, Result};
use crate::series::Series;

/// Inclusive range of admissible series lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRange {
    pub min: usize,
    pub max: usize,
}

impl DimRange {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min == 0 || min > max {
            return Err(DdwError::InvalidInput(format!(
                "dimension range [{min}, {max}] must satisfy 1 <= min <= max"
            )));
        }
        Ok(DimRange { min, max })
    }

    pub fn contains(&self, len: usize) -> bool {
        (self.min..=self.max).contains(&len)
    }
}

/// One reference cycle: every channel shares the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub id: i64,
    channels: BTreeMap<String, Series>,
    len: usize,
}

impl Cycle {
    pub fn new(id: i64, channels: BTreeMap<String, Series>) -> Result<Self> {
        let mut lens = channels.values().map(|s| s.len());
        let len = lens
            .next()
            .ok_or_else(|| DdwError::Validation(format!("cycle {id} has no channels")))?;
        if lens.any(|l| l != len) {
            let detail: Vec<String> = channels
                .iter()
                .map(|(name, s)| format!("{name}={}", s.len()))
                .collect();
            return Err(DdwError::Validation(format!(
                "cycle {id} has channels of different lengths ({})",
                detail.join(", ")
            )));
        }
        Ok(Cycle { id, channels, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn channel(&self, name: &str) -> Option<&Series> {
        self.channels.get(name)
    }

    pub fn channels(&self) -> &BTreeMap<String, Series> {
        &self.channels
    }
}

/// The set of recorded cycles a template is fitted against.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDataset {
    channel_names: Vec<String>,
    cycles: Vec<Cycle>,
    dim_range: DimRange,
}

impl ReferenceDataset {
    /// Validates that every cycle carries exactly `channel_names`.
    pub fn new(channel_names: Vec<String>, cycles: Vec<Cycle>) -> Result<Self> {
        if cycles.is_empty() {
            return Err(DdwError::Validation("no cycles".into()));
        }
        if channel_names.is_empty() {
            return Err(DdwError::Validation("no channels".into()));
        }
        let expected: BTreeSet<&str> = channel_names.iter().map(String::as_str).collect();
        if expected.len() != channel_names.len() {
            return Err(DdwError::Validation("duplicate channel names".into()));
        }
        if expected.iter().any(|n| n.is_empty()) {
            return Err(DdwError::Validation("empty channel name".into()));
        }
        for c in &cycles {
            let got: BTreeSet<&str> = c.channels.keys().map(String::as_str).collect();
            if got != expected {
                let missing: Vec<&str> = expected.difference(&got).copied().collect();
                let extra: Vec<&str> = got.difference(&expected).copied().collect();
                return Err(DdwError::Validation(format!(
                    "cycle {} channel mismatch (missing {:?}, unexpected {:?})",
                    c.id, missing, extra
                )));
            }
        }
        let min = cycles.iter().map(Cycle::len).min().unwrap_or(1);
        let max = cycles.iter().map(Cycle::len).max().unwrap_or(1);
        let dim_range = DimRange::new(min, max)?;
        Ok(ReferenceDataset {
            channel_names,
            cycles,
            dim_range,
        })
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn dim_range(&self) -> DimRange {
        self.dim_range
    }

    /// Most frequent cycle length and its multiplicity; ties go to the
    /// smallest length.
    pub fn modal_dimension(&self) -> (usize, usize) {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &self.cycles {
            *counts.entry(c.len()).or_default() += 1;
        }
        // BTreeMap iterates in ascending length; keep the first maximum.
        let mut best = (0, 0);
        for (len, count) in counts {
            if count > best.1 {
                best = (len, count);
            }
        }
        best
    }

    fn modal_cycles(&self) -> impl Iterator<Item = &Cycle> {
        let (d, _) = self.modal_dimension();
        self.cycles.iter().filter(move |c| c.len() == d)
    }

    /// Per-position mean of `channel` over the cycles of modal length.
    pub fn average_reference(&self, channel: &str) -> Result<Series> {
        self.require_channel(channel)?;
        let (d, count) = self.modal_dimension();
        let mut sum = vec![0.0; d];
        for c in self.modal_cycles() {
            for (acc, v) in sum.iter_mut().zip(c.channels[channel].iter()) {
                *acc += v;
            }
        }
        let n = count as f64;
        Ok(Series::from_vec_unchecked(
            sum.into_iter().map(|s| s / n).collect(),
        ))
    }

    /// Value ranges of `channel`: global over all cycles, per position over
    /// modal cycles.
    pub fn channel_bounds(&self, channel: &str) -> Result<ChannelBounds> {
        self.require_channel(channel)?;
        let mut global_min = f64::INFINITY;
        let mut global_max = f64::NEG_INFINITY;
        for c in &self.cycles {
            for &v in c.channels[channel].iter() {
                global_min = global_min.min(v);
                global_max = global_max.max(v);
            }
        }
        let (d, _) = self.modal_dimension();
        let mut env_min = vec![f64::INFINITY; d];
        let mut env_max = vec![f64::NEG_INFINITY; d];
        for c in self.modal_cycles() {
            for (i, &v) in c.channels[channel].iter().enumerate() {
                env_min[i] = env_min[i].min(v);
                env_max[i] = env_max[i].max(v);
            }
        }
        Ok(ChannelBounds {
            global_min,
            global_max,
            env_min,
            env_max,
            coord: None,
        })
    }

    /// Bounds for every channel.
    pub fn bounds(&self) -> Result<SearchBounds> {
        self.channel_names
            .iter()
            .map(|n| Ok((n.clone(), self.channel_bounds(n)?)))
            .collect()
    }

    fn require_channel(&self, channel: &str) -> Result<()> {
        if self.channel_names.iter().any(|n| n == channel) {
            Ok(())
        } else {
            Err(DdwError::InvalidInput(format!("unknown channel '{channel}'")))
        }
    }
}

/// Value limits for one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelBounds {
    pub global_min: f64,
    pub global_max: f64,
    /// Per-position envelope over modal-length cycles.
    pub env_min: Vec<f64>,
    pub env_max: Vec<f64>,
    /// Per-coordinate box used by fixed-dimension problems. When present it
    /// takes precedence over the global range for clamping and step scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coord: Option<(Vec<f64>, Vec<f64>)>,
}

impl ChannelBounds {
    /// Bounds of a fixed-dimension box.
    pub fn from_box(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let global_min = lower.iter().copied().fold(f64::INFINITY, f64::min);
        let global_max = upper.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ChannelBounds {
            global_min,
            global_max,
            env_min: lower.clone(),
            env_max: upper.clone(),
            coord: Some((lower, upper)),
        }
    }

    #[inline]
    pub fn clamp(&self, i: usize, v: f64) -> f64 {
        match &self.coord {
            Some((lo, hi)) => v.clamp(lo[i], hi[i]),
            None => v.clamp(self.global_min, self.global_max),
        }
    }

    /// Width of the admissible range at position `i`.
    #[inline]
    pub fn span(&self, i: usize) -> f64 {
        match &self.coord {
            Some((lo, hi)) => hi[i] - lo[i],
            None => self.global_max - self.global_min,
        }
    }

    pub fn contains(&self, i: usize, v: f64) -> bool {
        match &self.coord {
            Some((lo, hi)) => lo[i] <= v && v <= hi[i],
            None => self.global_min <= v && v <= self.global_max,
        }
    }
}

pub type SearchBounds = BTreeMap<String, ChannelBounds>;
