//! Sensitivity to the initial trust-region side length.
//!
//! ```text
//! cargo run --release --example ablation_l0 -- 20 150 3
//! ```

use adascale::benchmarks::{Benchmark, BenchmarkName};
use adascale::harness::median;
use adascale::trust_region::{run_optimizer, OptimizerVariant, RunConfig, VariantName};

fn main() -> adascale::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (d, budget, reps) = (
        *args.first().unwrap_or(&10),
        *args.get(1).unwrap_or(&80),
        *args.get(2).unwrap_or(&2),
    );
    let bench = Benchmark::new(BenchmarkName::Rastrigin, d)?;
    for l0 in [0.8, 0.4, 0.2] {
        for v in [VariantName::AdaScaleTurbo, VariantName::TurboMle] {
            let finals = (0..reps as u64)
                .map(|seed| {
                    let cfg = RunConfig::new(d, budget, seed).with_l_init(l0);
                    Ok(run_optimizer(&bench, OptimizerVariant::new(v), &cfg)?
                        .best()
                        .unwrap_or(f64::NAN))
                })
                .collect::<adascale::Result<Vec<f64>>>()?;
            println!("L0 = {l0}  {:<16} median final best {:.4}", v.as_str(), median(&finals));
        }
    }
    Ok(())
}
