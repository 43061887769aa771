//! Information gain of Sobol designs as the region shrinks, against the
//! linear growth of an independent (uninformative) prior.

use adascale::mig::{independent_ig, sobol_mig_curve};

fn main() -> adascale::Result<()> {
    let grid = [10, 25, 50, 100, 200];
    for d in [20, 100] {
        println!("D = {d}, ℓ = 0.5, σ² = 0.01   (ratio to independent IG)");
        print!("{:>6}", "L");
        grid.iter().for_each(|n| print!("{:>9}", format!("N={n}")));
        println!();
        for side in [0.8, 0.4, 0.2, 0.1] {
            let curve = sobol_mig_curve(d, side, 0.5, 0.01, &grid, None)?;
            print!("{side:>6}");
            for p in &curve.points {
                print!("{:>9.3}", p.ig / independent_ig(p.n, 0.01));
            }
            println!();
        }
    }
    Ok(())
}
