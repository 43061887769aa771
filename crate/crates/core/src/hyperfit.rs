//! Lengthscale priors and GP hyperparameter fitting (MLE or MAP).
//!
//! Everything is optimized in log-parameter space. In MAP mode the signal
//! variance is pinned to one (targets are standardized by the caller) and the
//! ARD lengthscales get a LogNormal prior whose location depends on the
//! dimension and, for AdaScale, on the current trust-region side length:
//! `log ℓ_i ~ N(√2 + log(L √D), √3)`.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::{log_marginal_likelihood_cached, KernelParams, PairwiseSq, MIN_NOISE};
use crate::numerics::{bounded_minimize, BoxBounds, MinimizeConfig, LN_SQRT_2PI};

/// Base location of the LogNormal lengthscale prior.
pub const BASE_MU: f64 = SQRT_2;
/// Base scale of the LogNormal lengthscale prior (√3).
pub const BASE_SIGMA: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PriorKind {
    /// Location shifted by `log(L √D)`.
    AdaScale,
    /// Location shifted by `log √D`.
    DScaled,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthscalePrior {
    pub kind: PriorKind,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
}

pub fn make_prior(kind: PriorKind, d: usize, side_length: f64) -> Result<LengthscalePrior> {
    if d == 0 {
        return Err(Error::InvalidInput("prior dimension must be positive".into()));
    }
    if !(side_length > 0.0 && side_length.is_finite()) {
        return Err(Error::InvalidTrustRegion(side_length));
    }
    let sqrt_d = (d as f64).sqrt();
    let (mu, sigma) = match kind {
        PriorKind::AdaScale => (BASE_MU + (side_length * sqrt_d).ln(), BASE_SIGMA),
        PriorKind::DScaled => (BASE_MU + sqrt_d.ln(), BASE_SIGMA),
        PriorKind::None => (0.0, 1.0),
    };
    Ok(LengthscalePrior {
        kind,
        mu: vec![mu; d],
        sigma: vec![sigma; d],
    })
}

impl LengthscalePrior {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn is_flat(&self) -> bool {
        self.kind == PriorKind::None
    }

    /// Mode of each LogNormal marginal, `exp(μ - σ²)`.
    pub fn mode(&self) -> Vec<f64> {
        self.mu
            .iter()
            .zip(&self.sigma)
            .map(|(m, s)| (m - s * s).exp())
            .collect()
    }

    /// `Σ log LN(ℓ_i)` and its gradient w.r.t. `log ℓ_i`; zero for a flat prior.
    pub fn log_density(&self, lengthscales: &[f64]) -> (f64, Vec<f64>) {
        if self.is_flat() {
            return (0.0, vec![0.0; lengthscales.len()]);
        }
        let mut total = 0.0;
        let grad = lengthscales
            .iter()
            .zip(self.mu.iter().zip(&self.sigma))
            .map(|(l, (m, s))| {
                let dist = LogNormal::new(*m, *s);
                let (v, g) = dist.log_density_log_coords(l.ln());
                total += v;
                g
            })
            .collect();
        (total, grad)
    }
}

/// LogNormal distribution given by the mean and standard deviation of `log x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormal {
    pub location: f64,
    pub scale: f64,
}

impl LogNormal {
    pub fn new(location: f64, scale: f64) -> Self {
        LogNormal { location, scale }
    }

    /// Density of `x` (not of `log x`), evaluated at `u = log x`, with its
    /// derivative w.r.t. `u`.
    pub fn log_density_log_coords(&self, u: f64) -> (f64, f64) {
        let z = (u - self.location) / self.scale;
        let v = -u - self.scale.ln() - LN_SQRT_2PI - 0.5 * z * z;
        (v, -1.0 - z / self.scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMode {
    Mle,
    Map,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub mode: FitMode,
    pub lengthscale_bounds: (f64, f64),
    pub signal_bounds: (f64, f64),
    pub noise_bounds: (f64, f64),
    pub noise_prior: Option<LogNormal>,
    pub fix_signal_variance: bool,
    pub n_restarts: usize,
    pub max_iter: usize,
}

impl FitConfig {
    /// Box-constrained maximum likelihood, TuRBO style.
    pub fn mle() -> Self {
        FitConfig {
            mode: FitMode::Mle,
            lengthscale_bounds: (0.005, 4.0),
            signal_bounds: (0.05, 20.0),
            noise_bounds: (MIN_NOISE, 1e-2),
            noise_prior: None,
            fix_signal_variance: false,
            n_restarts: 4,
            max_iter: 100,
        }
    }

    /// MAP with unit signal variance and a LogNormal(log 1e-3, 1) noise prior.
    /// The lengthscale bounds are numerical guards only.
    pub fn map() -> Self {
        FitConfig {
            mode: FitMode::Map,
            lengthscale_bounds: (1e-4, 1e4),
            signal_bounds: (1.0, 1.0),
            noise_bounds: (MIN_NOISE, 10.0),
            noise_prior: Some(LogNormal::new((1e-3f64).ln(), 1.0)),
            fix_signal_variance: true,
            n_restarts: 4,
            max_iter: 100,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = |(lo, hi): (f64, f64)| lo > 0.0 && lo <= hi && hi.is_finite();
        if !ok(self.lengthscale_bounds) || !ok(self.noise_bounds) || !ok(self.signal_bounds) {
            return Err(Error::InvalidInput("fit bounds must be positive and ordered".into()));
        }
        if self.noise_bounds.0 < MIN_NOISE {
            return Err(Error::InvalidInput(format!("noise floor below {MIN_NOISE}")));
        }
        if self.n_restarts == 0 {
            return Err(Error::InvalidInput("n_restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Negative log posterior (up to a constant) and its gradient w.r.t.
/// `[log ℓ_1, .., log ℓ_D, log σ_ε²]`. The signal variance is taken as given.
///
/// With a flat lengthscale prior and no noise prior this is exactly `-MLL`.
pub fn neg_map_objective(
    params: &KernelParams,
    xs: &[Vec<f64>],
    y: &[f64],
    prior: &LengthscalePrior,
    noise_prior: Option<&LogNormal>,
) -> Result<(f64, Vec<f64>)> {
    let (value, mut grad) = objective_cached(params, &PairwiseSq::new(xs), y, prior, noise_prior, true)?;
    grad.truncate(params.dim() + 1);
    Ok((value, grad))
}

/// Negative log posterior with gradient over `[log ℓ, log σ_ε², (log σ_f²)]`.
fn objective_cached(
    params: &KernelParams,
    pairs: &PairwiseSq,
    y: &[f64],
    prior: &LengthscalePrior,
    noise_prior: Option<&LogNormal>,
    fixed_signal: bool,
) -> Result<(f64, Vec<f64>)> {
    let d = params.dim();
    let mll = log_marginal_likelihood_cached(params, pairs, y)?;
    let mut value = -mll.value;
    let keep = if fixed_signal { d + 1 } else { d + 2 };
    let mut grad: Vec<f64> = mll.grad[..keep].iter().map(|g| -g).collect();
    let (lp, lg) = prior.log_density(&params.lengthscales);
    value -= lp;
    for (g, p) in grad.iter_mut().zip(&lg) {
        *g -= p;
    }
    if let Some(np) = noise_prior {
        let (v, g) = np.log_density_log_coords(params.noise_variance.ln());
        value -= v;
        grad[d] -= g;
    }
    Ok((value, grad))
}

/// Maps between the optimizer's log-space vector and `KernelParams`.
struct Layout {
    d: usize,
    free_signal: bool,
    fixed_signal: f64,
}

impl Layout {
    fn len(&self) -> usize {
        self.d + 1 + usize::from(self.free_signal)
    }

    fn params(&self, theta: &[f64]) -> KernelParams {
        KernelParams {
            lengthscales: theta[..self.d].iter().map(|v| v.exp()).collect(),
            noise_variance: theta[self.d].exp(),
            signal_variance: if self.free_signal {
                theta[self.d + 1].exp()
            } else {
                self.fixed_signal
            },
        }
    }

    fn theta(&self, p: &KernelParams) -> Vec<f64> {
        let mut t: Vec<f64> = p.lengthscales.iter().map(|l| l.ln()).collect();
        t.push(p.noise_variance.ln());
        if self.free_signal {
            t.push(p.signal_variance.ln());
        }
        t
    }
}

/// Fits hyperparameters from `n_restarts` starts and keeps the best.
pub fn fit(
    xs: &[Vec<f64>],
    y: &[f64],
    config: &FitConfig,
    prior: &LengthscalePrior,
    seed: u64,
) -> Result<KernelParams> {
    fit_from(xs, y, config, prior, seed, None)
}

/// Like [`fit`], but the previous optimum (when given) replaces one of the
/// random starts.
pub fn fit_from(
    xs: &[Vec<f64>],
    y: &[f64],
    config: &FitConfig,
    prior: &LengthscalePrior,
    seed: u64,
    previous: Option<&KernelParams>,
) -> Result<KernelParams> {
    config.validate()?;
    if xs.is_empty() || xs.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "fit needs matching non-empty data ({} inputs, {} targets)",
            xs.len(),
            y.len()
        )));
    }
    let d = xs[0].len();
    if prior.dim() != d {
        return Err(Error::InvalidInput(format!(
            "prior of dimension {} for {d}-dimensional data",
            prior.dim()
        )));
    }
    let map = config.mode == FitMode::Map;
    let layout = Layout {
        d,
        free_signal: !config.fix_signal_variance,
        fixed_signal: 1.0,
    };
    let bounds = log_bounds(&layout, config);
    let starts = initial_points(&layout, config, prior, &bounds, seed, previous);
    let flat = make_prior(PriorKind::None, d, 1.0)?;
    let active_prior = if map { prior } else { &flat };
    let noise_prior = if map { config.noise_prior.as_ref() } else { None };
    let opt = MinimizeConfig::new(config.max_iter, 1e-5);
    let pairs = PairwiseSq::new(xs);

    let results: Vec<Option<(f64, Vec<f64>)>> = starts
        .par_iter()
        .map(|start| {
            let objective = |theta: &[f64], grad: &mut [f64]| {
                let p = layout.params(theta);
                match objective_cached(&p, &pairs, y, active_prior, noise_prior, !layout.free_signal) {
                    Ok((v, g)) => {
                        grad.copy_from_slice(&g);
                        v
                    }
                    Err(_) => f64::INFINITY,
                }
            };
            bounded_minimize(objective, &bounds, start, &opt)
                .ok()
                .map(|m| (m.f, m.x))
        })
        .collect();

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (f, x) in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
            best = Some((f, x));
        }
    }
    let (_, theta) = best.ok_or(Error::FitFailed)?;
    let mut params = layout.params(&theta);
    if !map {
        let (lo, hi) = config.lengthscale_bounds;
        params.lengthscales.iter_mut().for_each(|l| *l = l.clamp(lo, hi));
    }
    params.noise_variance = params.noise_variance.max(MIN_NOISE);
    Ok(params)
}

fn log_bounds(layout: &Layout, config: &FitConfig) -> BoxBounds {
    let (ll, lu) = config.lengthscale_bounds;
    let mut lower = vec![ll.ln(); layout.d];
    let mut upper = vec![lu.ln(); layout.d];
    lower.push(config.noise_bounds.0.ln());
    upper.push(config.noise_bounds.1.ln());
    if layout.free_signal {
        lower.push(config.signal_bounds.0.ln());
        upper.push(config.signal_bounds.1.ln());
    }
    BoxBounds { lower, upper }
}

fn initial_points(
    layout: &Layout,
    config: &FitConfig,
    prior: &LengthscalePrior,
    bounds: &BoxBounds,
    seed: u64,
    previous: Option<&KernelParams>,
) -> Vec<Vec<f64>> {
    let n = layout.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::with_capacity(config.n_restarts);

    let mut first: Vec<f64> = (0..n).map(|i| 0.5 * (bounds.lower[i] + bounds.upper[i])).collect();
    if config.mode == FitMode::Map && !prior.is_flat() {
        for (t, m) in first.iter_mut().zip(prior.mode()) {
            *t = m.ln();
        }
        if let Some(np) = &config.noise_prior {
            first[layout.d] = np.location;
        }
    }
    bounds.project(&mut first);
    starts.push(first);

    if let Some(p) = previous.filter(|p| p.dim() == layout.d) {
        if starts.len() < config.n_restarts {
            let mut t = layout.theta(p);
            bounds.project(&mut t);
            starts.push(t);
        }
    }

    while starts.len() < config.n_restarts {
        let mut t: Vec<f64> = (0..n)
            .map(|i| rng.random_range(bounds.lower[i]..=bounds.upper[i]))
            .collect();
        if config.mode == FitMode::Map && !prior.is_flat() {
            for (ti, (mu, sigma)) in t.iter_mut().zip(prior.mu.iter().zip(&prior.sigma)) {
                *ti = Normal::new(*mu, *sigma).expect("positive prior scale").sample(&mut rng);
            }
            let (lo, hi) = (MIN_NOISE.ln(), (1e-1f64).ln());
            t[layout.d] = rng.random_range(lo..=hi);
        }
        bounds.project(&mut t);
        starts.push(t);
    }
    starts
}
