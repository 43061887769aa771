use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible observation-noise variance.
pub const MIN_NOISE: f64 = 1e-6;

const SQRT5: f64 = 2.236_067_977_499_79;

/// Hyperparameters of the ARD Matérn-5/2 surrogate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub lengthscales: Vec<f64>,
    pub signal_variance: f64,
    pub noise_variance: f64,
}

impl KernelParams {
    pub fn new(lengthscales: Vec<f64>, signal_variance: f64, noise_variance: f64) -> Result<Self> {
        if lengthscales.is_empty() {
            return Err(Error::InvalidInput("kernel needs at least one lengthscale".into()));
        }
        if let Some(l) = lengthscales.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidInput(format!("lengthscale {l} is not positive")));
        }
        if !(signal_variance.is_finite() && signal_variance >= 0.0) {
            return Err(Error::InvalidInput(format!("signal variance {signal_variance}")));
        }
        if !(noise_variance.is_finite() && noise_variance >= MIN_NOISE) {
            return Err(Error::InvalidInput(format!(
                "noise variance {noise_variance} below {MIN_NOISE}"
            )));
        }
        Ok(KernelParams {
            lengthscales,
            signal_variance,
            noise_variance,
        })
    }

    pub fn isotropic(d: usize, lengthscale: f64, signal_variance: f64, noise_variance: f64) -> Result<Self> {
        Self::new(vec![lengthscale; d], signal_variance, noise_variance)
    }

    pub fn dim(&self) -> usize {
        self.lengthscales.len()
    }

    pub(crate) fn scaled_distance(&self, x: &[f64], x2: &[f64]) -> f64 {
        x.iter()
            .zip(x2)
            .zip(&self.lengthscales)
            .map(|((a, b), l)| {
                let t = (a - b) / l;
                t * t
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// `(1 + √5 r + 5r²/3) exp(-√5 r)` for a scaled distance `r`.
#[inline]
pub fn matern52_profile(r: f64) -> f64 {
    let s = SQRT5 * r;
    (1.0 + s + s * s / 3.0) * (-s).exp()
}

/// `-(1/r) dκ/dr = (5/3)(1 + √5 r) exp(-√5 r)`, finite at `r = 0`.
#[inline]
pub(crate) fn matern52_radial_slope(r: f64) -> f64 {
    let s = SQRT5 * r;
    (5.0 / 3.0) * (1.0 + s) * (-s).exp()
}

pub fn matern52_ard(x: &[f64], x2: &[f64], params: &KernelParams) -> f64 {
    debug_assert_eq!(x.len(), params.dim());
    debug_assert_eq!(x2.len(), params.dim());
    params.signal_variance * matern52_profile(params.scaled_distance(x, x2))
}

/// Gram matrix `K_ij = k(x_i, x_j)` (no noise on the diagonal).
pub fn gram(xs: &[Vec<f64>], params: &KernelParams) -> DMatrix<f64> {
    let n = xs.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = params.signal_variance;
        for j in 0..i {
            let v = matern52_ard(&xs[i], &xs[j], params);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// `k(x_i, q)` for every training row.
pub fn cross_covariance(xs: &[Vec<f64>], q: &[f64], params: &KernelParams) -> Vec<f64> {
    xs.iter().map(|x| matern52_ard(x, q, params)).collect()
}
