//! Information gain of GP priors on space-filling designs, and numerical
//! checks of the distance bounds and lengthscale scaling identity.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gp::{gram, KernelParams};
use crate::numerics::{cholesky_logdet, sobol_sequence};
use crate::{Error, Result};

/// Noise variance used when a caller does not choose one.
pub const DEFAULT_NOISE: f64 = 0.01;

/// `½ log|I + K/σ²|` in nats.
pub fn information_gain(k: &DMatrix<f64>, noise_variance: f64) -> Result<f64> {
    check_noise(noise_variance)?;
    let n = k.nrows();
    let a = DMatrix::identity(n, n) + k / noise_variance;
    Ok(0.5 * cholesky_logdet(&a, 0.0)?.log_det)
}

/// Information gain when every observation is independent: `(N/2) log(1 + 1/σ²)`.
pub fn independent_ig(n: usize, noise_variance: f64) -> f64 {
    0.5 * n as f64 * (1.0 / noise_variance).ln_1p()
}

fn check_noise(noise_variance: f64) -> Result<()> {
    if noise_variance > 0.0 && noise_variance.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("noise variance {noise_variance}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigPoint {
    pub n: usize,
    pub ig: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigCurve {
    pub dim: usize,
    pub side_length: f64,
    pub lengthscale: f64,
    pub noise_variance: f64,
    pub points: Vec<MigPoint>,
}

impl MigCurve {
    pub fn ig_at(&self, n: usize) -> Option<f64> {
        self.points.iter().find(|p| p.n == n).map(|p| p.ig)
    }
}

/// Information gain of the first `N` Sobol points in `[0, L]^D` under an
/// isotropic unit-variance Matérn-5/2 prior, for each `N` in `n_grid`.
///
/// `seed = None` uses the canonical (unscrambled) sequence. One Cholesky of
/// the largest design serves every prefix, since the factor of a leading
/// block is the leading block of the factor.
pub fn sobol_mig_curve(
    dim: usize,
    side_length: f64,
    lengthscale: f64,
    noise_variance: f64,
    n_grid: &[usize],
    seed: Option<u64>,
) -> Result<MigCurve> {
    check_noise(noise_variance)?;
    if !(side_length > 0.0 && side_length <= 1.0) {
        return Err(Error::InvalidTrustRegion(side_length));
    }
    let n_max = n_grid.iter().copied().max().unwrap_or(0);
    let design: Vec<Vec<f64>> = sobol_sequence(n_max, dim, seed.unwrap_or(0), seed.is_some())?
        .into_iter()
        .map(|p| p.into_iter().map(|v| v * side_length).collect())
        .collect();
    let params = KernelParams::isotropic(dim, lengthscale, 1.0, noise_variance)?;
    let a = DMatrix::identity(n_max, n_max) + gram(&design, &params) / noise_variance;
    let chol = cholesky_logdet(&a, 0.0)?;
    let points = n_grid
        .iter()
        .map(|&n| MigPoint {
            n,
            ig: 0.5 * chol.leading_log_det(n),
        })
        .collect();
    Ok(MigCurve {
        dim,
        side_length,
        lengthscale,
        noise_variance,
        points,
    })
}

/// Closed-form bounds on the mean distance between two uniform points in `[0, L]^D`.
pub fn expected_distance_bounds(dim: usize, side_length: f64) -> (f64, f64) {
    let d = dim as f64;
    let lower = side_length / 3.0 * d.sqrt();
    let shape = ((1.0 + 2.0 * (1.0 - 3.0 / (5.0 * d)).sqrt()) / 3.0).sqrt();
    let upper = side_length / 6f64.sqrt() * d.sqrt() * shape;
    (lower, upper)
}

/// Monte-Carlo mean distance of uniform pairs in `[0, L]^D`, with its standard error.
pub fn mc_expected_distance(dim: usize, side_length: f64, n_pairs: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_pairs {
        let sq: f64 = (0..dim)
            .map(|_| {
                let diff = rng.random::<f64>() - rng.random::<f64>();
                diff * diff
            })
            .sum();
        let dist = side_length * sq.sqrt();
        sum += dist;
        sum_sq += dist * dist;
    }
    let n = n_pairs as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    pub max_abs_gram_diff: f64,
    pub ig_global: f64,
    pub ig_local: f64,
}

/// Compares `K` built with `ℓ = c√D` on a Sobol design `X` against `K′` built
/// with `ℓ = cL√D` on `LX`. The two coincide, so the gap is rounding only.
pub fn verify_scaling_invariance(dim: usize, side_length: f64, n: usize, c: f64, seed: u64) -> Result<ScalingCheck> {
    scaling_gap(dim, side_length, n, c, seed, true)
}

/// Same comparison with the local lengthscale left at `c√D`; the gap is then genuine.
pub fn unscaled_lengthscale_gap(dim: usize, side_length: f64, n: usize, c: f64, seed: u64) -> Result<ScalingCheck> {
    scaling_gap(dim, side_length, n, c, seed, false)
}

fn scaling_gap(dim: usize, side_length: f64, n: usize, c: f64, seed: u64, rescale: bool) -> Result<ScalingCheck> {
    if !(side_length > 0.0 && side_length <= 1.0) {
        return Err(Error::InvalidTrustRegion(side_length));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("design size {n} < 2")));
    }
    let xs = sobol_sequence(n, dim, seed, true)?;
    let local: Vec<Vec<f64>> = xs.iter().map(|p| p.iter().map(|v| v * side_length).collect()).collect();
    let root_d = (dim as f64).sqrt();
    let global_l = c * root_d;
    let local_l = if rescale { c * side_length * root_d } else { global_l };
    let k = gram(&xs, &KernelParams::isotropic(dim, global_l, 1.0, DEFAULT_NOISE)?);
    let k_local = gram(&local, &KernelParams::isotropic(dim, local_l, 1.0, DEFAULT_NOISE)?);
    let max_abs_gram_diff = k
        .iter()
        .zip(k_local.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ScalingCheck {
        max_abs_gram_diff,
        ig_global: information_gain(&k, DEFAULT_NOISE)?,
        ig_local: information_gain(&k_local, DEFAULT_NOISE)?,
    })
}

/// One cell of the distance-bound sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceCell {
    pub dim: usize,
    pub side_length: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub lower: f64,
    pub upper: f64,
}

impl DistanceCell {
    /// Inside the bounds with three standard errors of slack.
    pub fn passes(&self) -> bool {
        let slack = 3.0 * self.std_error;
        self.estimate >= self.lower - slack && self.estimate <= self.upper + slack
    }
}

/// One cell of the scaling-identity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCell {
    pub dim: usize,
    pub side_length: f64,
    pub n: usize,
    pub check: ScalingCheck,
}

impl ScalingCell {
    pub fn passes(&self) -> bool {
        self.check.max_abs_gram_diff <= 1e-12 && (self.check.ig_global - self.check.ig_local).abs() <= 1e-10
    }
}

pub const DISTANCE_DIMS: [usize; 4] = [2, 20, 50, 100];
pub const DISTANCE_SIDES: [f64; 3] = [0.1, 0.5, 1.0];
pub const SCALING_DIMS: [usize; 2] = [10, 100];
pub const SCALING_SIDES: [f64; 3] = [0.1, 0.3, 0.8];

/// Distance-bound sweep over [`DISTANCE_DIMS`] × [`DISTANCE_SIDES`].
pub fn distance_suite(n_pairs: usize, seed: u64) -> Vec<DistanceCell> {
    let mut cells = Vec::new();
    for (i, &dim) in DISTANCE_DIMS.iter().enumerate() {
        for (j, &side_length) in DISTANCE_SIDES.iter().enumerate() {
            let (estimate, std_error) = mc_expected_distance(dim, side_length, n_pairs, seed + (3 * i + j) as u64);
            let (lower, upper) = expected_distance_bounds(dim, side_length);
            cells.push(DistanceCell {
                dim,
                side_length,
                estimate,
                std_error,
                lower,
                upper,
            });
        }
    }
    cells
}

/// Scaling-identity sweep over [`SCALING_DIMS`] × [`SCALING_SIDES`].
pub fn scaling_suite(n: usize, c: f64, seed: u64) -> Result<Vec<ScalingCell>> {
    let mut cells = Vec::new();
    for &dim in &SCALING_DIMS {
        for &side_length in &SCALING_SIDES {
            cells.push(ScalingCell {
                dim,
                side_length,
                n,
                check: verify_scaling_invariance(dim, side_length, n, c, seed)?,
            });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn gain_closed_forms() {
        let ig = information_gain(&DMatrix::identity(3, 3), 1.0).unwrap();
        assert!(close(ig, 1.0397207708399179, 1e-14));
        let ones = DMatrix::from_element(2, 2, 1.0);
        assert!(close(information_gain(&ones, 1.0).unwrap(), 0.5493061443340548, 1e-14));
        let one = DMatrix::from_element(1, 1, 1.0);
        assert!(close(information_gain(&one, 0.25).unwrap(), 0.8047189562170502, 1e-14));
        assert!(information_gain(&one, 0.0).is_err());
    }

    #[test]
    fn independent_closed_forms() {
        assert_eq!(independent_ig(0, 0.3), 0.0);
        assert!(close(independent_ig(10, 1.0), 5.0 * 2f64.ln(), 1e-15));
        assert!(close(independent_ig(100, 0.01), 230.756_025_842_063, 1e-13));
    }

    #[test]
    fn tiny_region_is_rank_one() {
        let grid = [1, 5, 20, 50];
        let curve = sobol_mig_curve(10, 1e-6, 0.5, 0.01, &grid, None).unwrap();
        for p in &curve.points {
            let rank_one = 0.5 * (1.0 + p.n as f64 / 0.01).ln();
            assert!(close(p.ig, rank_one, 1e-4), "{} vs {rank_one}", p.ig);
        }
    }

    #[test]
    fn curve_matches_direct_evaluation() {
        let curve = sobol_mig_curve(7, 0.4, 0.5, 0.05, &[3, 12, 30], None).unwrap();
        let xs: Vec<Vec<f64>> = sobol_sequence(12, 7, 0, false)
            .unwrap()
            .into_iter()
            .map(|p| p.into_iter().map(|v| v * 0.4).collect())
            .collect();
        let k = gram(&xs, &KernelParams::isotropic(7, 0.5, 1.0, 0.05).unwrap());
        let direct = information_gain(&k, 0.05).unwrap();
        assert!(close(curve.ig_at(12).unwrap(), direct, 1e-12));
    }

    #[test]
    fn curve_invariants() {
        let grid: Vec<usize> = (0..=60).step_by(5).collect();
        for &l in &[0.05, 0.3, 1.0] {
            let curve = sobol_mig_curve(20, l, 0.5, 0.01, &grid, Some(3)).unwrap();
            let mut prev = 0.0;
            for p in &curve.points {
                assert!(p.ig >= prev - 1e-12);
                assert!(p.ig <= independent_ig(p.n, 0.01) + 1e-9);
                prev = p.ig;
            }
        }
        assert!(sobol_mig_curve(2, 0.0, 0.5, 0.01, &[2], None).is_err());
        assert!(sobol_mig_curve(2, 1.5, 0.5, 0.01, &[2], None).is_err());
    }

    #[test]
    fn distance_bound_oracles() {
        let (lo, hi) = expected_distance_bounds(1, 1.0);
        assert!(close(lo, 1.0 / 3.0, 1e-15));
        assert!(close(hi, 0.35472297987, 1e-10));
        let (lo, hi) = expected_distance_bounds(100, 0.5);
        assert!(close(lo, 1.66666666667, 1e-10));
        assert!(close(hi, 2.03919611506, 1e-10));
        let (_, hi) = expected_distance_bounds(100_000, 1.0);
        assert!(close(hi / (100_000f64.sqrt() / 6f64.sqrt()), 1.0, 1e-5));
    }

    #[test]
    fn unit_interval_mean_distance() {
        let (m, se) = mc_expected_distance(1, 1.0, 1_000_000, 11);
        assert!((m - 1.0 / 3.0).abs() <= 3.0 * se, "{m} {se}");
        assert!(se > 0.0 && se < 3e-4);
    }

    #[test]
    fn distance_is_homogeneous() {
        let (a, sa) = mc_expected_distance(20, 1.0, 20_000, 5);
        let (b, sb) = mc_expected_distance(20, 0.3, 20_000, 5);
        assert!((b / 0.3 - a).abs() <= 3.0 * (sa + sb / 0.3));
    }

    #[test]
    fn scaling_identity() {
        let check = verify_scaling_invariance(10, 1.0, 16, 0.3, 2).unwrap();
        assert_eq!(check.max_abs_gram_diff, 0.0);
        assert_eq!(check.ig_global, check.ig_local);
        let check = verify_scaling_invariance(30, 0.2, 32, 0.3, 2).unwrap();
        assert!(check.max_abs_gram_diff <= 1e-12);
        let gap = unscaled_lengthscale_gap(50, 0.25, 64, 0.3, 0).unwrap();
        assert!(gap.max_abs_gram_diff > 0.1);
        assert!(verify_scaling_invariance(3, 0.5, 1, 0.3, 0).is_err());
    }
}
