//! MLE versus MAP lengthscale fits on a small trust-region dataset.
//!
//! The region-aware prior puts its mode at a lengthscale proportional to
//! `L√D`, so shrinking the region shrinks the lengthscales the fit prefers.

use adascale::benchmarks::{Benchmark, BenchmarkName};
use adascale::gp::Standardizer;
use adascale::hyperfit::{fit, make_prior, FitConfig, PriorKind};
use adascale::numerics::sobol_sequence;

fn geo_mean(v: &[f64]) -> f64 {
    (v.iter().map(|l| l.ln()).sum::<f64>() / v.len() as f64).exp()
}

fn main() -> adascale::Result<()> {
    let d = 20;
    let bench = Benchmark::new(BenchmarkName::Rastrigin, d)?;
    for side in [0.8, 0.2, 0.05] {
        // 30 points inside a cube of side `side` around the center
        let xs: Vec<Vec<f64>> = sobol_sequence(30, d, 1, true)?
            .into_iter()
            .map(|p| p.into_iter().map(|v| 0.5 + side * (v - 0.5)).collect())
            .collect();
        let raw: Vec<f64> = xs.iter().map(|x| bench.evaluate(x)).collect::<adascale::Result<_>>()?;
        let y = Standardizer::fit(&raw).apply(&raw);

        let flat = make_prior(PriorKind::None, d, side)?;
        let mle = fit(&xs, &y, &FitConfig::mle(), &flat, 0)?;
        let prior = make_prior(PriorKind::AdaScale, d, side)?;
        let map = fit(&xs, &y, &FitConfig::map(), &prior, 0)?;
        println!(
            "L = {side:<5} prior mode {:.3}  MLE ℓ (geo mean) {:.3}  MAP ℓ (geo mean) {:.3}  MAP noise {:.1e}",
            prior.mode()[0],
            geo_mean(&mle.lengthscales),
            geo_mean(&map.lengthscales),
            map.noise_variance
        );
    }
    Ok(())
}
