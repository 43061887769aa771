use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use adascale::benchmarks::{Benchmark, BenchmarkName};
use adascale::harness::{self, ExperimentConfig};
use adascale::mig;

#[derive(Parser)]
#[command(version, about = "Trust-region Bayesian optimization experiments and diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads for replicate and variant runs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Information gain of Sobol designs inside shrinking regions.
    Mig {
        #[arg(long, value_delimiter = ',', default_values_t = [20, 40, 60, 80, 100])]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.8, 0.4, 0.2, 0.1])]
        sides: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        lengthscale: f64,
        #[arg(long, default_value_t = mig::DEFAULT_NOISE)]
        noise: f64,
        #[arg(long, default_value_t = 200)]
        nmax: usize,
        /// Spacing of the design sizes written out.
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Numerical verification suites.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Benchmark utilities.
    Bench {
        #[command(subcommand)]
        action: BenchAction,
    },
    /// Recompute summaries from trace files.
    Summarize {
        /// Glob matching trace_<variant>_r<replicate>.csv files.
        #[arg(long)]
        traces: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Mean-distance bounds and lengthscale scaling identity.
    Props {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum BenchAction {
    /// Evaluate one point of the normalized unit cube.
    Eval {
        #[arg(long)]
        name: BenchmarkName,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        point: Vec<f64>,
    },
}

enum Outcome {
    Done,
    VerificationFailed,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse().command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> adascale::Result<Outcome> {
    match command {
        Command::Run { config, jobs } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let outcome = harness::run_experiment(&cfg, jobs)?;
            for v in &outcome.summary.variants {
                let s = &v.final_stats;
                println!(
                    "{:<16} median {:>14.6}  se {:>12.6}  iqr [{:.6}, {:.6}]",
                    v.variant.as_str(),
                    s.median,
                    s.std_error,
                    s.q25,
                    s.q75
                );
            }
            println!("wrote {} files to {}", outcome.files.len(), cfg.output_dir.display());
        }
        Command::Mig {
            dims,
            sides,
            lengthscale,
            noise,
            nmax,
            step,
            out,
        } => {
            let grid: Vec<usize> = (step.max(1)..=nmax).step_by(step.max(1)).collect();
            let mut curves = Vec::new();
            for &d in &dims {
                for &l in &sides {
                    curves.push(mig::sobol_mig_curve(d, l, lengthscale, noise, &grid, None)?);
                }
            }
            harness::write_mig_csv(BufWriter::new(File::create(&out)?), &curves)?;
            println!("wrote {} curves to {}", curves.len(), out.display());
        }
        Command::Verify {
            suite: VerifySuite::Props { out, pairs, seed },
        } => {
            let distance = mig::distance_suite(pairs, seed);
            let scaling = mig::scaling_suite(64, 0.3, seed)?;
            let mut all_pass = true;
            for c in &distance {
                all_pass &= c.passes();
                println!(
                    "{} distance D={:<3} L={:<4} estimate {:.5} in [{:.5}, {:.5}] (se {:.1e})",
                    verdict(c.passes()),
                    c.dim,
                    c.side_length,
                    c.estimate,
                    c.lower,
                    c.upper,
                    c.std_error
                );
            }
            for c in &scaling {
                all_pass &= c.passes();
                println!(
                    "{} scaling  D={:<3} L={:<4} max|K-K'| {:.1e}  |dIG| {:.1e}",
                    verdict(c.passes()),
                    c.dim,
                    c.side_length,
                    c.check.max_abs_gram_diff,
                    (c.check.ig_global - c.check.ig_local).abs()
                );
            }
            harness::write_props_csv(BufWriter::new(File::create(&out)?), &distance, &scaling)?;
            if !all_pass {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Bench {
            action: BenchAction::Eval { name, dim, point },
        } => {
            let bench = Benchmark::new(name, dim)?;
            if point.len() != dim {
                return Err(adascale::Error::InvalidInput(format!(
                    "point has {} coordinates, expected {dim}",
                    point.len()
                )));
            }
            println!("{}", harness::fmt_float(bench.evaluate(&point)?));
        }
        Command::Summarize { traces, out } => {
            let records = harness::read_traces_glob(&traces)?;
            let table = harness::summarize(&records)?;
            harness::write_summary_csv(BufWriter::new(File::create(&out)?), &table)?;
            println!("summarized {} traces into {}", records.len(), out.display());
        }
    }
    Ok(Outcome::Done)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
