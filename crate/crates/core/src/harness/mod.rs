//! Replicated experiments: configs, seeded runs, trace files and summaries.

mod config;
mod persist;
mod stats;
mod summary;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

pub use config::{BenchmarkSpec, ExperimentConfig};
pub use persist::{
    fmt_float, parse_trace_file_name, read_trace, read_traces_glob, trace_file_name, write_final_best_csv,
    write_mig_csv, write_props_csv, write_summary_csv, write_summary_json, write_trace,
};
pub use stats::{mean, median, quantile, std_error, Stats};
pub use summary::{summarize, SummaryTable, VariantSummary};

use crate::trust_region::{run_optimizer, OptimizerVariant, RunRecord, VariantName};
use crate::{Error, Result};

pub const SUMMARY_CSV: &str = "summary.csv";
pub const FINAL_BEST_CSV: &str = "final_best.csv";
pub const SUMMARY_JSON: &str = "summary.json";

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// `(variant, replicate, record)` in config order, replicates innermost.
    pub runs: Vec<(VariantName, usize, RunRecord)>,
    pub summary: SummaryTable,
    pub files: Vec<PathBuf>,
}

/// Runs every (variant, replicate) pair on `jobs` worker threads and writes
/// the traces and summaries into the config's output directory.
///
/// Replicate `r` of every variant uses seed `base_seed + r`, so all variants
/// share that replicate's initial design. Results are gathered before any
/// file is written, so the artifacts do not depend on `jobs`.
pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<ExperimentOutcome> {
    config.validate()?;
    let bench = config.benchmark.build()?;
    let tasks: Vec<(VariantName, usize)> = config
        .variants
        .iter()
        .flat_map(|&v| (0..config.n_replicates).map(move |r| (v, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
    let records: Vec<RunRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(variant, r)| {
                let start = Instant::now();
                let rec = run_optimizer(&bench, OptimizerVariant::new(variant), &config.run_config(r))?;
                log::info!(
                    "{variant} r{r}: best {:.6} after {} evaluations ({:.1}s){}",
                    rec.best().unwrap_or(f64::NAN),
                    rec.rows.len(),
                    start.elapsed().as_secs_f64(),
                    if rec.valid { "" } else { ", partial run" }
                );
                Ok(rec)
            })
            .collect::<Result<_>>()
    })?;

    let dir = &config.output_dir;
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (&(variant, r), rec) in tasks.iter().zip(&records) {
        let path = dir.join(trace_file_name(variant, r));
        write_trace(BufWriter::new(File::create(&path)?), rec)?;
        files.push(path);
    }
    let summary = summarize(&records)?;
    files.extend(write_summaries(dir, &summary)?);
    let runs = tasks
        .into_iter()
        .zip(records)
        .map(|((v, r), rec)| (v, r, rec))
        .collect();
    Ok(ExperimentOutcome { runs, summary, files })
}

/// Writes `summary.csv`, `final_best.csv` and `summary.json` into `dir`.
pub fn write_summaries(dir: &Path, summary: &SummaryTable) -> Result<Vec<PathBuf>> {
    let paths = [SUMMARY_CSV, FINAL_BEST_CSV, SUMMARY_JSON].map(|f| dir.join(f));
    write_summary_csv(BufWriter::new(File::create(&paths[0])?), summary)?;
    write_final_best_csv(BufWriter::new(File::create(&paths[1])?), summary)?;
    write_summary_json(BufWriter::new(File::create(&paths[2])?), summary)?;
    Ok(paths.to_vec())
}
