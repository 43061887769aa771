//! Limited-memory quasi-Newton minimization inside a box.
//!
//! Variables sitting on a bound with the gradient pushing outwards are held
//! fixed; the L-BFGS direction is computed on the remaining free variables
//! and every trial point is projected back onto the box before the Armijo
//! test.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidInput(format!(
                "bounds of different lengths {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(Error::InvalidInput(format!("bad bound [{l}, {u}] at {i}")));
            }
        }
        Ok(BoxBounds { lower, upper })
    }

    pub fn unit(d: usize) -> Self {
        BoxBounds {
            lower: vec![0.0; d],
            upper: vec![1.0; d],
        }
    }

    pub fn uniform(d: usize, lower: f64, upper: f64) -> Self {
        BoxBounds {
            lower: vec![lower; d],
            upper: vec![upper; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    pub fn project(&self, x: &mut [f64]) {
        for ((v, l), u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*l, *u);
        }
    }

    /// Maps a point of the unit cube affinely into the box.
    pub fn from_unit(&self, z: &[f64]) -> Vec<f64> {
        z.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(t, (l, u))| (l + (u - l) * t).clamp(*l, *u))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeConfig {
    pub max_iter: usize,
    /// Stop once the infinity norm of the projected gradient is below this.
    pub tol: f64,
    /// Stop once the relative decrease of one iteration is below this.
    pub ftol: f64,
    pub memory: usize,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig {
            max_iter: 200,
            tol: 1e-6,
            ftol: 1e-14,
            memory: 10,
        }
    }
}

impl MinimizeConfig {
    pub fn new(max_iter: usize, tol: f64) -> Self {
        MinimizeConfig {
            max_iter,
            tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACK: usize = 40;

/// Minimizes `objective` over `bounds` starting from `x0`.
///
/// `objective(x, grad)` returns `f(x)` and writes `∇f(x)` into `grad`. Use
/// [`finite_difference`] to wrap a value-only function. The start point is
/// projected onto the box. A non-finite value at the start point is an
/// error; non-finite values at trial points are rejected by the line search.
pub fn bounded_minimize<F>(mut objective: F, bounds: &BoxBounds, x0: &[f64], config: &MinimizeConfig) -> Result<Minimum>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = bounds.dim();
    if x0.len() != n {
        return Err(Error::InvalidInput(format!(
            "start point has {} coordinates, bounds have {n}",
            x0.len()
        )));
    }
    if !(config.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut x = x0.to_vec();
    bounds.project(&mut x);
    let mut g = vec![0.0; n];
    let mut f = objective(&x, &mut g);
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteObjective);
    }

    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut x_trial = vec![0.0; n];
    let mut g_trial = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iter {
        if projected_gradient_norm(&x, &g, bounds) <= config.tol {
            converged = true;
            break;
        }
        iterations += 1;

        let free: Vec<bool> = (0..n)
            .map(|i| {
                let at_lower = x[i] <= bounds.lower[i] && g[i] > 0.0;
                let at_upper = x[i] >= bounds.upper[i] && g[i] < 0.0;
                !(at_lower || at_upper)
            })
            .collect();

        let mut accepted = false;
        let mut f_accepted = f;
        for attempt in 0..2 {
            if attempt == 1 {
                if history.is_empty() {
                    break;
                }
                history.clear();
            }
            let mut d = search_direction(&g, &free, &history);
            let mut slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();
            if !(slope < 0.0) {
                history.clear();
                d = g
                    .iter()
                    .zip(&free)
                    .map(|(gi, &fr)| if fr { -gi } else { 0.0 })
                    .collect();
                slope = d.iter().zip(&g).map(|(a, b)| a * b).sum();
                if !(slope < 0.0) {
                    break;
                }
            }
            let mut step = if history.is_empty() {
                let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                (1.0 / norm).min(1.0)
            } else {
                1.0
            };
            for _ in 0..MAX_BACKTRACK {
                for i in 0..n {
                    x_trial[i] = (x[i] + step * d[i]).clamp(bounds.lower[i], bounds.upper[i]);
                }
                let decrease: f64 = (0..n).map(|i| g[i] * (x_trial[i] - x[i])).sum();
                let f_trial = objective(&x_trial, &mut g_trial);
                let finite = f_trial.is_finite() && g_trial.iter().all(|v| v.is_finite());
                if finite && f_trial <= f + ARMIJO * decrease && f_trial <= f {
                    accepted = true;
                    f_accepted = f_trial;
                    break;
                }
                step *= 0.5;
            }
            if accepted {
                break;
            }
        }
        if !accepted {
            break;
        }

        let s: Vec<f64> = x_trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_trial.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ss: f64 = s.iter().map(|v| v * v).sum();
        let yy: f64 = y.iter().map(|v| v * v).sum();
        if sy > 1e-10 * (ss * yy).sqrt() && sy > 0.0 {
            if history.len() == config.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }

        let f_prev = f;
        std::mem::swap(&mut x, &mut x_trial);
        std::mem::swap(&mut g, &mut g_trial);
        f = f_accepted;
        if (f_prev - f) <= config.ftol * f_prev.abs().max(f.abs()).max(1.0) {
            converged = projected_gradient_norm(&x, &g, bounds) <= config.tol;
            break;
        }
    }

    Ok(Minimum {
        x,
        f,
        iterations,
        converged,
    })
}

fn projected_gradient_norm(x: &[f64], g: &[f64], bounds: &BoxBounds) -> f64 {
    x.iter()
        .zip(g)
        .enumerate()
        .map(|(i, (xi, gi))| ((xi - gi).clamp(bounds.lower[i], bounds.upper[i]) - xi).abs())
        .fold(0.0, f64::max)
}

fn search_direction(g: &[f64], free: &[bool], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.iter().zip(free).map(|(gi, &fr)| if fr { *gi } else { 0.0 }).collect();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter().zip(free).map(|(v, &fr)| if fr { -v } else { 0.0 }).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Wraps a value-only function with central finite-difference gradients,
/// step `1e-6 (1 + |xᵢ|)`, falling back to one-sided steps at the bounds.
pub fn finite_difference<'a, F>(mut f: F, bounds: &'a BoxBounds) -> impl FnMut(&[f64], &mut [f64]) -> f64 + 'a
where
    F: FnMut(&[f64]) -> f64 + 'a,
{
    let mut probe = Vec::new();
    move |x: &[f64], grad: &mut [f64]| {
        let fx = f(x);
        probe.clear();
        probe.extend_from_slice(x);
        for i in 0..x.len() {
            let h = 1e-6 * (1.0 + x[i].abs());
            let hi = (x[i] + h).min(bounds.upper[i]);
            let lo = (x[i] - h).max(bounds.lower[i]);
            probe[i] = hi;
            let f_hi = if hi > x[i] { f(&probe) } else { fx };
            probe[i] = lo;
            let f_lo = if lo < x[i] { f(&probe) } else { fx };
            probe[i] = x[i];
            let width = hi - lo;
            grad[i] = if width > 0.0 { (f_hi - f_lo) / width } else { 0.0 };
        }
        fx
    }
}
