//! Exact GP regression with the ARD Matérn-5/2 kernel on a 1-d toy function.

use adascale::gp::{GpModel, KernelParams};

fn main() -> adascale::Result<()> {
    let f = |x: f64| (6.0 * x).sin() + 0.5 * x;
    let xs: Vec<Vec<f64>> = [0.05, 0.2, 0.35, 0.6, 0.9].iter().map(|&x| vec![x]).collect();
    let ys: Vec<f64> = xs.iter().map(|x| f(x[0])).collect();

    let params = KernelParams::new(vec![0.2], 1.0, 1e-6)?;
    let model = GpModel::new(xs, ys, params)?;
    let grid: Vec<Vec<f64>> = (0..=20).map(|i| vec![i as f64 / 20.0]).collect();
    let (mean, var) = model.posterior(&grid);

    println!("{:>5} {:>9} {:>9} {:>9}", "x", "f(x)", "mean", "std");
    for ((q, m), v) in grid.iter().zip(&mean).zip(&var) {
        println!("{:>5.2} {:>9.4} {:>9.4} {:>9.4}", q[0], f(q[0]), m, v.sqrt());
    }

    let p = model.predict_with_gradient(&[0.5]);
    println!(
        "at x = 0.5: mean {:.4}, d mean/dx {:.4}, variance {:.2e}",
        p.mean, p.mean_grad[0], p.variance
    );
    Ok(())
}
