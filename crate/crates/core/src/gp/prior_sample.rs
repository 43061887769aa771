use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

/// Default number of random features.
pub const DEFAULT_FEATURES: usize = 2048;

const MATERN_NU: f64 = 2.5;

/// A function drawn (approximately) from an isotropic Matérn-5/2 GP prior
/// with unit signal variance, via random Fourier features:
/// `f(x) = √(2/M) Σ_m w_m cos(ω_m·x + b_m)`.
///
/// Frequencies follow the kernel's spectral density, a multivariate Student-t
/// with `2ν = 5` degrees of freedom and scale `1/ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorSampleObjective {
    pub feature_weights: Vec<Vec<f64>>,
    pub feature_phases: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub lengthscale: f64,
}

impl PriorSampleObjective {
    pub fn dim(&self) -> usize {
        self.feature_weights.first().map_or(0, Vec::len)
    }

    pub fn n_features(&self) -> usize {
        self.feature_phases.len()
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let scale = (2.0 / self.n_features() as f64).sqrt();
        let sum: f64 = self
            .feature_weights
            .iter()
            .zip(&self.feature_phases)
            .zip(&self.output_weights)
            .map(|((omega, b), w)| {
                let proj: f64 = omega.iter().zip(x).map(|(o, v)| o * v).sum();
                w * (proj + b).cos()
            })
            .sum();
        scale * sum
    }
}

pub fn sample_prior_objective(d: usize, lengthscale: f64, n_features: usize, seed: u64) -> PriorSampleObjective {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let gamma = Gamma::new(MATERN_NU, 1.0).expect("valid gamma shape");
    let mut feature_weights = Vec::with_capacity(n_features);
    let mut feature_phases = Vec::with_capacity(n_features);
    let mut output_weights = Vec::with_capacity(n_features);
    for _ in 0..n_features {
        // t_{2ν}: z √(ν / G), G ~ Gamma(ν, 1)
        let g: f64 = gamma.sample(&mut rng);
        let scale = (MATERN_NU / g).sqrt() / lengthscale;
        let omega: Vec<f64> = (0..d)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                z * scale
            })
            .collect();
        feature_weights.push(omega);
        feature_phases.push(rng.random::<f64>() * std::f64::consts::TAU);
        output_weights.push(StandardNormal.sample(&mut rng));
    }
    PriorSampleObjective {
        feature_weights,
        feature_phases,
        output_weights,
        lengthscale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::matern52_profile;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_seed_same_function() {
        let a = sample_prior_objective(10, 0.1, 256, 42);
        let b = sample_prior_objective(10, 0.1, 256, 42);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let x: Vec<f64> = (0..10).map(|_| rng.random()).collect();
            assert_eq!(a.evaluate(&x), b.evaluate(&x));
        }
    }

    #[test]
    fn variance_is_near_one() {
        for seed in 0..3 {
            let f = sample_prior_objective(20, 0.1, DEFAULT_FEATURES, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let vals: Vec<f64> = (0..10_000)
                .map(|_| f.evaluate(&(0..20).map(|_| rng.random()).collect::<Vec<_>>()))
                .collect();
            let m = vals.iter().sum::<f64>() / vals.len() as f64;
            let v = vals.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
            assert!((0.5..=2.0).contains(&v), "seed {seed}: variance {v}");
        }
    }

    // Monte-Carlo: E[f(x) f(x')] over independent draws equals k(|x - x'|).
    #[test]
    fn covariance_matches_kernel() {
        let (d, l) = (5, 0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in [0.0, 0.1, 0.2, 0.4] {
            let mut acc = 0.0;
            let pairs = 1000;
            for p in 0..pairs {
                let f = sample_prior_objective(d, l, 4096, 10_000 + p);
                let x: Vec<f64> = (0..d).map(|_| rng.random()).collect();
                let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = dir.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
                let x2: Vec<f64> = x.iter().zip(&dir).map(|(a, u)| a + r * u / norm).collect();
                acc += f.evaluate(&x) * f.evaluate(&x2);
            }
            let est = acc / pairs as f64;
            let exact = matern52_profile(r / l);
            assert!((est - exact).abs() < 0.1, "r={r}: {est} vs {exact}");
        }
    }

    #[test]
    fn shorter_lengthscale_is_rougher() {
        let rough = sample_prior_objective(10, 0.05, DEFAULT_FEATURES, 3);
        let smooth = sample_prior_objective(10, 0.2, DEFAULT_FEATURES, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut a, mut b) = (0.0, 0.0);
        for i in 0..500 {
            let x: Vec<f64> = (0..10).map(|_| rng.random()).collect();
            let mut y = x.clone();
            y[i % 10] += 0.01;
            a += (rough.evaluate(&x) - rough.evaluate(&y)).abs();
            b += (smooth.evaluate(&x) - smooth.evaluate(&y)).abs();
        }
        assert!(a > b, "{a} vs {b}");
    }
}
