//! Dataset files, synthetic gait data and run-record output.

mod csv_dataset;
mod results;
mod synth;

pub use csv_dataset::{load_dataset, read_dataset, write_dataset, write_dataset_to};
pub use results::{read_record, write_odc_rates, write_results, OdcRateRow};
pub use synth::{synth_dataset, SynthOutput, SynthParams, DEFAULT_CHANNELS};
