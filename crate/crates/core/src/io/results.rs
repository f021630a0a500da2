use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::record::RunRecord;

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `<prefix>.json` (the full record) and `<prefix>.csv` (one row per
/// iteration). Returns both paths.
pub fn write_results(record: &RunRecord, prefix: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let prefix = prefix.as_ref();
    let json_path = with_suffix(prefix, ".json");
    let csv_path = with_suffix(prefix, ".csv");

    let mut json = BufWriter::new(File::create(&json_path)?);
    serde_json::to_writer_pretty(&mut json, record)?;
    json.write_all(b"\n")?;
    json.flush()?;

    let mut csv = BufWriter::new(File::create(&csv_path)?);
    writeln!(csv, "iteration,best_fitness,mean_fitness,std_fitness")?;
    for s in &record.history {
        writeln!(
            csv,
            "{},{},{},{}",
            s.iteration, s.best_fitness, s.mean_fitness, s.std_fitness
        )?;
    }
    csv.flush()?;
    Ok((json_path, csv_path))
}

pub fn read_record(path: impl AsRef<Path>) -> Result<RunRecord> {
    let reader = BufReader::new(File::open(path)?);
    Ok(serde_json::from_reader(reader)?)
}

/// Share of repeats in each ODC class at one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdcRateRow {
    pub iteration: usize,
    pub best_rate: f64,
    pub better_rate: f64,
    pub worst_rate: f64,
}

/// Writes `<prefix>.csv` with per-iteration rates and `<prefix>.json` with
/// the rows plus their overall means.
pub fn write_odc_rates(rows: &[OdcRateRow], prefix: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    #[derive(Serialize)]
    struct Summary<'a> {
        mean_best_rate: f64,
        mean_better_rate: f64,
        mean_worst_rate: f64,
        iterations: &'a [OdcRateRow],
    }
    let prefix = prefix.as_ref();
    let json_path = with_suffix(prefix, ".json");
    let csv_path = with_suffix(prefix, ".csv");
    let n = rows.len().max(1) as f64;
    let summary = Summary {
        mean_best_rate: rows.iter().map(|r| r.best_rate).sum::<f64>() / n,
        mean_better_rate: rows.iter().map(|r| r.better_rate).sum::<f64>() / n,
        mean_worst_rate: rows.iter().map(|r| r.worst_rate).sum::<f64>() / n,
        iterations: rows,
    };
    let mut json = BufWriter::new(File::create(&json_path)?);
    serde_json::to_writer_pretty(&mut json, &summary)?;
    json.write_all(b"\n")?;
    json.flush()?;

    let mut csv = BufWriter::new(File::create(&csv_path)?);
    writeln!(csv, "iteration,best_rate,better_rate,worst_rate")?;
    for r in rows {
        writeln!(csv, "{},{},{},{}", r.iteration, r.best_rate, r.better_rate, r.worst_rate)?;
    }
    csv.flush()?;
    Ok((json_path, csv_path))
}
