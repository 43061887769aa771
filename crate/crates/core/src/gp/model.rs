use nalgebra::DVector;

use super::kernel::{cross_covariance, gram, matern52_radial_slope, KernelParams};
use crate::error::{Error, Result};
use crate::numerics::{cholesky_logdet, CholFactor};

/// Zero-mean, unit-variance rescaling of the targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardizer {
    pub mean: f64,
    pub std: f64,
}

impl Standardizer {
    /// Falls back to unit scale when the targets are constant (or fewer than two).
    pub fn fit(y: &[f64]) -> Self {
        if y.is_empty() {
            return Standardizer { mean: 0.0, std: 1.0 };
        }
        let n = y.len() as f64;
        let mean = y.iter().sum::<f64>() / n;
        let var = if y.len() > 1 {
            y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std = if var > 0.0 && var.is_finite() { var.sqrt() } else { 1.0 };
        Standardizer { mean, std }
    }

    pub fn forward(&self, v: f64) -> f64 {
        (v - self.mean) / self.std
    }

    pub fn inverse(&self, v: f64) -> f64 {
        v * self.std + self.mean
    }

    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|v| self.forward(*v)).collect()
    }
}

/// Posterior mean/variance at one point, optionally with input gradients.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
    pub mean_grad: Vec<f64>,
    pub variance_grad: Vec<f64>,
}

/// A GP conditioned on training data; immutable once built.
#[derive(Debug, Clone)]
pub struct GpModel {
    train_x: Vec<Vec<f64>>,
    train_y: Vec<f64>,
    params: KernelParams,
    chol: Option<CholFactor>,
    alpha: DVector<f64>,
}

impl GpModel {
    pub fn new(train_x: Vec<Vec<f64>>, train_y: Vec<f64>, params: KernelParams) -> Result<Self> {
        if train_x.len() != train_y.len() {
            return Err(Error::InvalidInput(format!(
                "{} inputs but {} targets",
                train_x.len(),
                train_y.len()
            )));
        }
        if let Some(row) = train_x.iter().find(|r| r.len() != params.dim()) {
            return Err(Error::InvalidInput(format!(
                "input of dimension {} for a {}-dimensional kernel",
                row.len(),
                params.dim()
            )));
        }
        if train_x.is_empty() {
            return Ok(GpModel {
                train_x,
                train_y,
                params,
                chol: None,
                alpha: DVector::zeros(0),
            });
        }
        let mut k = gram(&train_x, &params);
        for i in 0..k.nrows() {
            k[(i, i)] += params.noise_variance;
        }
        let chol = cholesky_logdet(&k, 0.0)?;
        let alpha = chol.solve(&DVector::from_column_slice(&train_y));
        Ok(GpModel {
            train_x,
            train_y,
            params,
            chol: Some(chol),
            alpha,
        })
    }

    /// Model with the GP prior only.
    pub fn prior(params: KernelParams) -> Self {
        GpModel {
            train_x: Vec::new(),
            train_y: Vec::new(),
            params,
            chol: None,
            alpha: DVector::zeros(0),
        }
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn train_x(&self) -> &[Vec<f64>] {
        &self.train_x
    }

    pub fn train_y(&self) -> &[f64] {
        &self.train_y
    }

    pub fn len(&self) -> usize {
        self.train_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.train_x.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn chol(&self) -> Option<&CholFactor> {
        self.chol.as_ref()
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    /// Latent posterior mean and variance at each query row.
    pub fn posterior(&self, queries: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
        queries
            .iter()
            .map(|q| {
                let p = self.predict_point(q);
                (p.0, p.1)
            })
            .unzip()
    }

    fn predict_point(&self, q: &[f64]) -> (f64, f64) {
        let prior = self.params.signal_variance;
        let Some(chol) = &self.chol else {
            return (0.0, prior);
        };
        let k = DVector::from_vec(cross_covariance(&self.train_x, q, &self.params));
        let mean = k.dot(&self.alpha);
        let v = chol.solve_lower(&k);
        let var = (prior - v.norm_squared()).max(0.0);
        (mean, var)
    }

    /// Posterior at `q` with gradients of mean and variance w.r.t. `q`.
    pub fn predict_with_gradient(&self, q: &[f64]) -> Prediction {
        let d = self.dim();
        let prior = self.params.signal_variance;
        let Some(chol) = &self.chol else {
            return Prediction {
                mean: 0.0,
                variance: prior,
                mean_grad: vec![0.0; d],
                variance_grad: vec![0.0; d],
            };
        };
        let k = DVector::from_vec(cross_covariance(&self.train_x, q, &self.params));
        let mean = k.dot(&self.alpha);
        let v = chol.solve_lower(&k);
        let var = prior - v.norm_squared();
        // w = (K + σ²I)⁻¹ k
        let w = chol.solve_upper(&v);

        let inv_l2: Vec<f64> = self.params.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();
        let mut mean_grad = vec![0.0; d];
        let mut var_grad = vec![0.0; d];
        for (i, x) in self.train_x.iter().enumerate() {
            let r = self.params.scaled_distance(q, x);
            // dk/dq_j = -σ_f² s(r) (q_j - x_j) / ℓ_j²
            let s = self.params.signal_variance * matern52_radial_slope(r);
            let (a, b) = (self.alpha[i] * s, w[i] * s);
            for j in 0..d {
                let dk = -(q[j] - x[j]) * inv_l2[j];
                mean_grad[j] += a * dk;
                var_grad[j] -= 2.0 * b * dk;
            }
        }
        if var <= 0.0 {
            var_grad.iter_mut().for_each(|g| *g = 0.0);
        }
        Prediction {
            mean,
            variance: var.max(0.0),
            mean_grad,
            variance_grad: var_grad,
        }
    }

    /// Rebuilds the caches from scratch; used to check consistency.
    pub fn refreshed(&self) -> Result<Self> {
        GpModel::new(self.train_x.clone(), self.train_y.clone(), self.params.clone())
    }
}
