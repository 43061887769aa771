//! One AdaScale-TuRBO run with an observer that logs refits, region size and restarts.

use adascale::benchmarks::{Benchmark, BenchmarkName};
use adascale::trust_region::{run_optimizer_observed, OptimizerVariant, RunConfig, RunEvent, VariantName};

fn main() -> adascale::Result<()> {
    let d = 10;
    let bench = Benchmark::new(BenchmarkName::Rastrigin, d)?;
    let config = RunConfig::new(d, 150, 3);
    let record = run_optimizer_observed(
        &bench,
        OptimizerVariant::new(VariantName::AdaScaleTurbo),
        &config,
        &mut |event| match event {
            RunEvent::Refit {
                evaluations,
                side_length,
                prior,
                params,
            } => println!(
                "[{evaluations:>3}] refit  L = {side_length:.4}  prior mode {:.3}  ℓ_0 = {:.3}",
                prior.mode().first().copied().unwrap_or(f64::NAN),
                params.lengthscales[0]
            ),
            RunEvent::Restart { evaluations } => println!("[{evaluations:>3}] restart"),
            RunEvent::Proposal { .. } => {}
        },
    )?;
    println!(
        "best value {:.4} after {} evaluations",
        record.best().unwrap_or(f64::NAN),
        record.rows.len()
    );
    Ok(())
}
