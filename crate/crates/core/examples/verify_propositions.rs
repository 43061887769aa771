//! Mean pairwise distance bounds and the lengthscale scaling identity.

use adascale::mig::{distance_suite, scaling_suite, unscaled_lengthscale_gap};

fn main() -> adascale::Result<()> {
    for c in distance_suite(100_000, 0) {
        println!(
            "{} D={:<3} L={:<4} {:.4} <= {:.4} <= {:.4}",
            if c.passes() { "ok  " } else { "FAIL" },
            c.dim,
            c.side_length,
            c.lower,
            c.estimate,
            c.upper
        );
    }
    for c in scaling_suite(64, 0.3, 0)? {
        println!(
            "{} D={:<3} L={:<4} max|K-K'| = {:.1e}",
            if c.passes() { "ok  " } else { "FAIL" },
            c.dim,
            c.side_length,
            c.check.max_abs_gram_diff
        );
    }
    let gap = unscaled_lengthscale_gap(50, 0.25, 64, 0.3, 0)?;
    println!("without rescaling ℓ by L: max|K-K'| = {:.3}", gap.max_abs_gram_diff);
    Ok(())
}
