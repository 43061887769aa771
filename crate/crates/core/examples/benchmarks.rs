//! The synthetic objectives, queried through the normalized unit cube.

use adascale::benchmarks::{to_native, Benchmark, BenchmarkName};

fn main() -> adascale::Result<()> {
    let d = 10;
    for name in [
        BenchmarkName::Schwefel,
        BenchmarkName::Rastrigin,
        BenchmarkName::Michalewicz,
        BenchmarkName::Sphere,
    ] {
        let b = Benchmark::new(name, d)?;
        let center = vec![0.5; d];
        let native = to_native(&center, &b.native_bounds)?;
        println!(
            "{:<12} bounds [{:>8.3}, {:>7.3}]  f(center) = {:>10.4}  (native x_0 = {:.3})",
            name.as_str(),
            b.native_bounds.lower[0],
            b.native_bounds.upper[0],
            b.evaluate(&center)?,
            native[0]
        );
    }

    // Schwefel's optimum sits near x_i = 420.9687 in native coordinates
    let s = Benchmark::new(BenchmarkName::Schwefel, 50)?;
    println!(
        "schwefel at its optimum: {:.2e}",
        s.evaluate_native(&vec![420.9687; 50])
    );

    let g = Benchmark::gp_prior_sample(d, 0.3, 11)?;
    let vals: Vec<f64> = (0..5)
        .map(|i| g.evaluate(&vec![0.2 * i as f64; d]))
        .collect::<adascale::Result<_>>()?;
    println!("GP prior sample along the diagonal: {vals:.3?}");
    Ok(())
}
