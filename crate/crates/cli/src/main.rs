//! `ddw` command-line interface.
//!
//! Exit codes: 0 success, 2 usage error, 3 data validation error,
//! 4 runtime error.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ddw_core::io::{
    load_dataset, synth_dataset, write_dataset, write_odc_rates, write_results, OdcRateRow,
    SynthParams, DEFAULT_CHANNELS,
};
use ddw_core::{
    run, run_baseline, BaselineAlgorithm, BaselineConfig, BenchmarkProblem, DdwError,
    EngineConfig, FunctionId, OdcClass, Problem, RunRecord,
};

#[derive(Parser)]
#[command(name = "ddw", version, about = "Dynamic dimension wrapping optimizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic gait dataset around planted templates.
    Synth {
        #[arg(long, default_value_t = 80)]
        cycles: usize,
        #[arg(long = "base-len", default_value_t = 60)]
        base_len: usize,
        #[arg(long, default_value_t = 1)]
        jitter: usize,
        /// Noise standard deviation in degrees.
        #[arg(long, default_value_t = 2.0)]
        noise: f64,
        /// Comma-separated channel labels.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_CHANNELS.map(String::from))]
        channels: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the planted templates as JSON.
        #[arg(long)]
        planted: Option<PathBuf>,
    },
    /// Search for a motion template over a gait dataset.
    Template {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an optimizer on one of the F1-F23 benchmark functions.
    Bench {
        #[arg(long = "fn")]
        function: FunctionId,
        #[arg(long, value_enum, default_value_t = Algo::Ddw)]
        algo: Algo,
        /// Dimension; defaults to 30 for F1-F13 and the fixed size otherwise.
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-iteration Best/Better/Worst rates of the optimal dimension
    /// solution over repeated runs.
    OdcStats {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 10)]
        repeats: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value_t = 50)]
    pop: usize,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn engine(&self, seed: u64) -> EngineConfig {
        EngineConfig {
            population_size: self.pop,
            max_iterations: self.iters,
            seed,
            workers: self.workers,
            ..EngineConfig::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Ddw,
    Pso,
    Gwo,
}

fn exit_code(err: &DdwError) -> u8 {
    match err {
        DdwError::Config(_) => 2,
        DdwError::InvalidInput(_)
        | DdwError::Validation(_)
        | DdwError::Format(_)
        | DdwError::Parse { .. }
        | DdwError::Precondition(_) => 3,
        DdwError::InvalidState(_) | DdwError::Internal(_) | DdwError::Io(_) | DdwError::Serde(_) => 4,
    }
}

fn report(record: &RunRecord, out: &std::path::Path) -> Result<(), DdwError> {
    let (json, csv) = write_results(record, out)?;
    println!(
        "{} on {}: best fitness {} after {} iterations ({:.1}s)",
        record.algorithm,
        record.problem,
        record.final_fitness(),
        record.history.len(),
        record.wall_time_secs
    );
    println!("wrote {} and {}", json.display(), csv.display());
    Ok(())
}

fn execute(command: Command) -> Result<(), DdwError> {
    match command {
        Command::Synth { cycles, base_len, jitter, noise, channels, seed, out, planted } => {
            let params = SynthParams {
                n_cycles: cycles,
                channels,
                base_length: base_len,
                length_jitter: jitter,
                noise_sd: noise,
                seed,
            };
            let synth = synth_dataset(&params)?;
            write_dataset(&synth.dataset, &out)?;
            println!("wrote {} cycles to {}", synth.dataset.cycles().len(), out.display());
            if let Some(path) = planted {
                let file = BufWriter::new(File::create(&path)?);
                serde_json::to_writer_pretty(file, &synth.planted)?;
                println!("wrote planted templates to {}", path.display());
            }
        }
        Command::Template { data, run: args, out } => {
            let dataset = load_dataset(&data)?;
            let record = run(Problem::Template(&dataset), &args.engine(args.seed))?;
            report(&record, &out)?;
        }
        Command::Bench { function, algo, dim, run: args, out } => {
            let problem = match dim {
                Some(d) => BenchmarkProblem::new(function, d)?,
                None => BenchmarkProblem::with_default_dim(function),
            };
            let record = match algo {
                Algo::Ddw => run(Problem::Blackbox(&problem), &args.engine(args.seed))?,
                Algo::Pso | Algo::Gwo => {
                    let algorithm = match algo {
                        Algo::Pso => BaselineAlgorithm::pso(),
                        _ => BaselineAlgorithm::gwo(),
                    };
                    let config = BaselineConfig {
                        population_size: args.pop,
                        max_iterations: args.iters,
                        workers: args.workers,
                        ..BaselineConfig::new(algorithm, args.seed)
                    };
                    run_baseline(&config, &problem, None)?
                }
            };
            report(&record, &out)?;
        }
        Command::OdcStats { data, run: args, repeats, out } => {
            if repeats == 0 {
                return Err(DdwError::Config("repeats must be at least 1".into()));
            }
            let dataset = load_dataset(&data)?;
            let mut counts = vec![[0usize; 3]; args.iters];
            for r in 0..repeats {
                let record = run(Problem::Template(&dataset), &args.engine(args.seed + r))?;
                for (slot, stats) in counts.iter_mut().zip(&record.history) {
                    match stats.odc {
                        Some(OdcClass::Best) => slot[0] += 1,
                        Some(OdcClass::Better) => slot[1] += 1,
                        Some(OdcClass::Worst) => slot[2] += 1,
                        None => {}
                    }
                }
            }
            let n = repeats as f64;
            let rows: Vec<OdcRateRow> = counts
                .iter()
                .enumerate()
                .map(|(i, c)| OdcRateRow {
                    iteration: i + 1,
                    best_rate: c[0] as f64 / n,
                    better_rate: c[1] as f64 / n,
                    worst_rate: c[2] as f64 / n,
                })
                .collect();
            let (json, csv) = write_odc_rates(&rows, &out)?;
            let mean = |f: fn(&OdcRateRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
            println!(
                "best {:.4} better {:.4} worst {:.4} over {repeats} runs",
                mean(|r| r.best_rate),
                mean(|r| r.better_rate),
                mean(|r| r.worst_rate)
            );
            println!("wrote {} and {}", json.display(), csv.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
