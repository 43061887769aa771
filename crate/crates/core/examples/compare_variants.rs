//! Runs every optimizer variant once on a benchmark and prints the final best.
//!
//! ```text
//! cargo run --release --example compare_variants -- rastrigin 50 300 0
//! ```

use std::time::Instant;

use adascale::benchmarks::Benchmark;
use adascale::trust_region::{run_optimizer, OptimizerVariant, RunConfig, VariantName};

fn main() -> adascale::Result<()> {
    env_logger::init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map_or("rastrigin", String::as_str);
    let dim: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let budget: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(100);
    let seed: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0);
    let only: Option<VariantName> = args.get(4).and_then(|s| s.parse().ok());

    let bench = Benchmark::new(name.parse()?, dim)?;
    let cfg = RunConfig::new(dim, budget, seed);
    println!("{name} D={dim} T={budget} seed={seed}");
    for v in VariantName::ALL.into_iter().filter(|v| only.is_none_or(|o| o == *v)) {
        let start = Instant::now();
        let rec = run_optimizer(&bench, OptimizerVariant::new(v), &cfg)?;
        let restarts = rec.rows.iter().filter(|r| r.restart_flag).count();
        println!(
            "{:<16} best {:>12.4}  restarts {restarts:>2}  {:>6.1}s",
            v.as_str(),
            rec.best().unwrap_or(f64::NAN),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
