use nalgebra::DVector;

use nalgebra::DMatrix;

use super::kernel::{matern52_profile, matern52_radial_slope, KernelParams};
use crate::error::Result;
use crate::numerics::{cholesky_logdet, LN_SQRT_2PI};

/// Log marginal likelihood and its gradient in log-parameter coordinates.
///
/// `grad` is laid out as `[∂/∂log ℓ_1, .., ∂/∂log ℓ_D, ∂/∂log σ_ε², ∂/∂log σ_f²]`.
#[derive(Debug, Clone)]
pub struct MllValue {
    pub value: f64,
    pub grad: Vec<f64>,
}

impl MllValue {
    pub fn lengthscale_grad(&self) -> &[f64] {
        &self.grad[..self.grad.len() - 2]
    }

    pub fn noise_grad(&self) -> f64 {
        self.grad[self.grad.len() - 2]
    }

    pub fn signal_grad(&self) -> f64 {
        self.grad[self.grad.len() - 1]
    }
}

/// Squared coordinate differences of every pair `j < i`, reused while the
/// training inputs stay fixed (e.g. across one hyperparameter fit).
#[derive(Debug, Clone)]
pub struct PairwiseSq {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl PairwiseSq {
    pub fn new(xs: &[Vec<f64>]) -> Self {
        let n = xs.len();
        let d = xs.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * n.saturating_sub(1) / 2 * d);
        for i in 0..n {
            for j in 0..i {
                data.extend(xs[i].iter().zip(&xs[j]).map(|(a, b)| (a - b) * (a - b)));
            }
        }
        PairwiseSq { n, d, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize, &[f64])> + '_ {
        let d = self.d.max(1);
        (0..self.n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .zip(self.data.chunks_exact(d))
            .map(|((i, j), c)| (i, j, c))
    }
}

pub fn log_marginal_likelihood(params: &KernelParams, xs: &[Vec<f64>], y: &[f64]) -> Result<MllValue> {
    log_marginal_likelihood_cached(params, &PairwiseSq::new(xs), y)
}

pub fn log_marginal_likelihood_cached(params: &KernelParams, pairs: &PairwiseSq, y: &[f64]) -> Result<MllValue> {
    let d = params.dim();
    let n = pairs.len();
    if n == 0 {
        return Ok(MllValue {
            value: 0.0,
            grad: vec![0.0; d + 2],
        });
    }
    let sf2 = params.signal_variance;
    let inv_l2: Vec<f64> = params.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();
    let mut radii = Vec::with_capacity(n * (n - 1) / 2);
    let mut k = DMatrix::zeros(n, n);
    for (i, j, sq) in pairs.pairs() {
        let r = dot(sq, &inv_l2).sqrt();
        radii.push(r);
        let v = sf2 * matern52_profile(r);
        k[(i, j)] = v;
        k[(j, i)] = v;
    }
    for i in 0..n {
        k[(i, i)] = sf2 + params.noise_variance;
    }
    let chol = cholesky_logdet(&k, 0.0)?;
    let yv = DVector::from_column_slice(y);
    let alpha = chol.solve(&yv);
    let value = -0.5 * yv.dot(&alpha) - 0.5 * chol.log_det - n as f64 * LN_SQRT_2PI;

    // W = ααᵀ - (K + σ²I)⁻¹, then ∂/∂θ = ½ tr(W ∂K/∂θ)
    let mut w = chol.inverse();
    w.iter_mut().for_each(|v| *v = -*v);
    w.ger(1.0, &alpha, &alpha, 1.0);

    let mut raw = vec![0.0; d];
    let mut trace = 0.0;
    let mut signal = 0.0;
    for i in 0..n {
        trace += w[(i, i)];
        signal += w[(i, i)] * sf2;
    }
    for ((i, j, sq), r) in pairs.pairs().zip(&radii) {
        let wij = w[(i, j)];
        signal += 2.0 * wij * sf2 * matern52_profile(*r);
        let c = wij * sf2 * matern52_radial_slope(*r);
        for (g, s) in raw.iter_mut().zip(sq) {
            *g += c * s;
        }
    }
    let mut grad: Vec<f64> = raw.iter().zip(&inv_l2).map(|(g, il)| g * il).collect();
    grad.push(0.5 * params.noise_variance * trace);
    grad.push(0.5 * signal);
    Ok(MllValue { value, grad })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
