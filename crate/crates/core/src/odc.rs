//! Optimal dimension collection.
//!
//! Starting from the best individual, every other member of the elite part is
//! aligned against it and, position by position, the value whose cached
//! quality is smaller is kept. The result is the optimal dimension solution
//! used as a second anchor by the update strategies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::ReferenceDataset;
use crate::error::{DdwError, Result};
use crate::fitness::{blackbox_fitness, template_fitness, Objective};
use crate::individual::Individual;
use crate::series::{map_slices, Series};

/// One per-position decision taken by [`odc_merge_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct MergeChoice {
    pub channel: String,
    pub index: usize,
    /// Position in the other individual matched against `index`.
    pub matched: usize,
    pub took_other: bool,
    pub chosen_quality: f64,
    pub rejected_quality: f64,
}

type Quality = BTreeMap<String, Vec<f64>>;

fn quality_of<'a>(q: &'a Quality, channel: &str, len: usize, who: &str) -> Result<&'a [f64]> {
    match q.get(channel) {
        Some(v) if v.len() == len => Ok(v),
        Some(v) => Err(DdwError::InvalidState(format!(
            "{who} quality for '{channel}' has {} entries, expected {len}",
            v.len()
        ))),
        None => Err(DdwError::InvalidState(format!(
            "{who} has no cached quality for '{channel}'"
        ))),
    }
}

/// Merges `other` into `base` position by position; see [`odc_merge_traced`].
pub fn odc_merge(
    base: &Individual,
    other: &Individual,
    base_quality: &Quality,
    other_quality: &Quality,
) -> Result<Individual> {
    odc_merge_traced(base, other, base_quality, other_quality).map(|(d, _)| d)
}

/// Merges `other` into `base` and records every decision.
///
/// For position `i` of a `base` channel, the candidate from `other` is the
/// aligned position with the smallest cached quality. `base` keeps its value
/// when its own quality is less than or equal to the candidate's.
pub fn odc_merge_traced(
    base: &Individual,
    other: &Individual,
    base_quality: &Quality,
    other_quality: &Quality,
) -> Result<(Individual, Vec<MergeChoice>)> {
    let mut channels = BTreeMap::new();
    let mut trace = Vec::new();
    for (name, b) in &base.channels {
        let o = other.channel(name).ok_or_else(|| {
            DdwError::InvalidInput(format!("merge partner lacks channel '{name}'"))
        })?;
        let bq = quality_of(base_quality, name, b.len(), "base")?;
        let oq = quality_of(other_quality, name, o.len(), "partner")?;
        let dirs = map_slices(b, o).dirs;

        let mut out = Vec::with_capacity(b.len());
        for (i, dir) in dirs.iter().enumerate() {
            let mut j = *dir.start();
            for k in dir.clone() {
                if oq[k] < oq[j] {
                    j = k;
                }
            }
            let took_other = bq[i] > oq[j];
            out.push(if took_other { o[j] } else { b[i] });
            trace.push(MergeChoice {
                channel: name.clone(),
                index: i,
                matched: j,
                took_other,
                chosen_quality: if took_other { oq[j] } else { bq[i] },
                rejected_quality: if took_other { bq[i] } else { oq[j] },
            });
        }
        channels.insert(name.clone(), Series::from_vec_unchecked(out));
    }
    Ok((Individual::new(channels), trace))
}

fn cached_quality(x: &Individual) -> Result<&Quality> {
    x.fitness
        .as_ref()
        .map(|f| &f.per_dim_quality)
        .ok_or_else(|| DdwError::InvalidState("individual has not been evaluated".into()))
}

/// Folds every member of `part_a` (sorted best first) into the best one,
/// re-evaluating the running solution after each merge.
pub fn odc_collect(part_a: &[Individual], dataset: &ReferenceDataset) -> Result<Individual> {
    let (best, rest) = part_a
        .split_first()
        .ok_or_else(|| DdwError::InvalidInput("ODC needs at least one individual".into()))?;
    let mut d = best.clone();
    if d.fitness.is_none() {
        d.fitness = Some(template_fitness(&d, dataset)?);
    }
    for other in rest {
        let merged = odc_merge(&d, other, cached_quality(&d)?, cached_quality(other)?)?;
        let report = template_fitness(&merged, dataset)?;
        d = merged;
        d.fitness = Some(report);
    }
    Ok(d)
}

/// Coordinate-probe variant for fixed-dimension objectives: each coordinate of
/// every other member is tried in turn and kept only on strict improvement.
pub fn odc_probe_blackbox(part_a: &[Individual], objective: &dyn Objective) -> Result<Individual> {
    let (best, rest) = part_a
        .split_first()
        .ok_or_else(|| DdwError::InvalidInput("ODC needs at least one individual".into()))?;
    let single = |x: &Individual| -> Result<Vec<f64>> {
        match (x.channels.len(), x.channels.values().next()) {
            (1, Some(s)) if s.len() == objective.dimension() => Ok(s.to_vec()),
            _ => Err(DdwError::InvalidInput(
                "coordinate probing needs single-channel individuals of the objective's dimension"
                    .into(),
            )),
        }
    };
    let name = best
        .channels
        .keys()
        .next()
        .cloned()
        .ok_or_else(|| DdwError::InvalidInput("individual has no channels".into()))?;

    let mut current = single(best)?;
    let mut value = objective.evaluate(&current);
    for other in rest {
        let donor = single(other)?;
        for (i, &candidate) in donor.iter().enumerate() {
            let previous = current[i];
            if previous == candidate {
                continue;
            }
            current[i] = candidate;
            let v = objective.evaluate(&current);
            if v < value {
                value = v;
            } else {
                current[i] = previous;
            }
        }
    }
    let mut d = Individual::single(&name, Series::new(current)?);
    d.fitness = Some(blackbox_fitness(&d, objective)?);
    Ok(d)
}

/// How the collected solution compares with the elite part it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OdcClass {
    /// Strictly better than every member.
    Best,
    /// Strictly better than at least one member, but not all.
    Better,
    /// No better than any member.
    Worst,
}

pub fn classify(d_best_fitness: f64, part_a_fitness: &[f64]) -> OdcClass {
    let beaten = part_a_fitness
        .iter()
        .filter(|&&f| d_best_fitness < f)
        .count();
    if beaten == part_a_fitness.len() && beaten > 0 {
        OdcClass::Best
    } else if beaten > 0 {
        OdcClass::Better
    } else {
        OdcClass::Worst
    }
}
