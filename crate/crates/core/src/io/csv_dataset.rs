//! Long-format cycle files: `cycle_id,channel,sample_index,value`, one sample
//! per row.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{Cycle, ReferenceDataset};
use crate::error::{DdwError, Result};
use crate::series::Series;

const HEADER: [&str; 4] = ["cycle_id", "channel", "sample_index", "value"];

#[derive(Debug, Serialize, Deserialize)]
struct GaitFileRow {
    cycle_id: i64,
    channel: String,
    sample_index: usize,
    value: f64,
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<ReferenceDataset> {
    read_dataset(File::open(path)?)
}

pub fn read_dataset<R: Read>(reader: R) -> Result<ReferenceDataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| DdwError::Format(format!("cannot read header: {e}")))?
        .clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(DdwError::Format(format!(
            "expected header '{}', found '{}'",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    // Cycles and channels keep their order of first appearance.
    let mut cycle_order: Vec<i64> = Vec::new();
    let mut channel_order: Vec<String> = Vec::new();
    let mut samples: BTreeMap<(i64, String), Vec<(usize, f64)>> = BTreeMap::new();
    for row in rdr.deserialize::<GaitFileRow>() {
        let row = row.map_err(|e| DdwError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        if !row.value.is_finite() {
            return Err(DdwError::Validation(format!(
                "cycle {} channel '{}' sample {} is not finite",
                row.cycle_id, row.channel, row.sample_index
            )));
        }
        if !cycle_order.contains(&row.cycle_id) {
            cycle_order.push(row.cycle_id);
        }
        if !channel_order.contains(&row.channel) {
            channel_order.push(row.channel.clone());
        }
        samples
            .entry((row.cycle_id, row.channel))
            .or_default()
            .push((row.sample_index, row.value));
    }
    if cycle_order.is_empty() {
        return Err(DdwError::Validation("no cycles".into()));
    }

    let mut cycles = Vec::with_capacity(cycle_order.len());
    for id in cycle_order {
        let mut channels = BTreeMap::new();
        for name in &channel_order {
            let Some(mut points) = samples.remove(&(id, name.clone())) else {
                return Err(DdwError::Validation(format!(
                    "cycle {id} is missing channel '{name}'"
                )));
            };
            points.sort_by_key(|p| p.0);
            for (expected, (idx, _)) in points.iter().enumerate() {
                if *idx != expected {
                    return Err(DdwError::Validation(format!(
                        "cycle {id} channel '{name}': sample indices are not 0..{} without gaps",
                        points.len()
                    )));
                }
            }
            let values = points.into_iter().map(|p| p.1).collect();
            channels.insert(name.clone(), Series::new(values)?);
        }
        cycles.push(Cycle::new(id, channels)?);
    }
    ReferenceDataset::new(channel_order, cycles)
}

pub fn write_dataset(dataset: &ReferenceDataset, path: impl AsRef<Path>) -> Result<()> {
    write_dataset_to(dataset, File::create(path)?)
}

pub fn write_dataset_to<W: Write>(dataset: &ReferenceDataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| DdwError::Io(std::io::Error::other(e));
    w.write_record(HEADER).map_err(io)?;
    for cycle in dataset.cycles() {
        for name in dataset.channel_names() {
            let s = cycle.channel(name).expect("dataset invariant");
            for (i, v) in s.iter().enumerate() {
                // `{}` on f64 prints the shortest string that parses back exactly.
                w.write_record([
                    cycle.id.to_string(),
                    name.clone(),
                    i.to_string(),
                    v.to_string(),
                ])
                .map_err(io)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
