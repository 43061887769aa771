use serde::{Deserialize, Serialize};

use crate::numerics::BoxBounds;

/// Trust-region constants. Defaults follow TuRBO-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrParams {
    pub l_init: f64,
    pub l_min: f64,
    pub l_max: f64,
    pub tau_succ: usize,
    pub tau_fail: usize,
    /// Relative margin a new value must beat the incumbent by; 0 means strict improvement.
    pub success_threshold: f64,
}

impl TrParams {
    pub fn turbo_defaults(d: usize, batch_size: usize) -> Self {
        TrParams {
            l_init: 0.8,
            l_min: 0.5f64.powi(7),
            l_max: 1.6,
            tau_succ: 3,
            tau_fail: failure_tolerance(d, batch_size),
            success_threshold: 0.0,
        }
    }
}

/// `⌈max(4/q, D/q)⌉`.
pub fn failure_tolerance(d: usize, batch_size: usize) -> usize {
    let q = batch_size.max(1);
    d.max(4).div_ceil(q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustRegionState {
    pub center: Vec<f64>,
    pub side_length: f64,
    pub succ_count: usize,
    pub fail_count: usize,
    pub params: TrParams,
}

impl TrustRegionState {
    pub fn new(center: Vec<f64>, params: TrParams) -> Self {
        TrustRegionState {
            center,
            side_length: params.l_init,
            succ_count: 0,
            fail_count: 0,
            params,
        }
    }

    /// Records one batch outcome; returns `true` when the region collapsed
    /// below `l_min` and was reset to `l_init`.
    pub fn update(&mut self, y_batch_min: f64, y_incumbent: f64) -> bool {
        let p = self.params;
        let margin = p.success_threshold * y_incumbent.abs();
        if y_batch_min < y_incumbent - margin {
            self.succ_count += 1;
            self.fail_count = 0;
        } else {
            self.succ_count = 0;
            self.fail_count += 1;
        }
        if self.succ_count >= p.tau_succ {
            self.side_length = (2.0 * self.side_length).min(p.l_max);
            self.succ_count = 0;
        } else if self.fail_count >= p.tau_fail {
            self.side_length /= 2.0;
            self.fail_count = 0;
        }
        if self.side_length < p.l_min {
            self.side_length = p.l_init;
            self.succ_count = 0;
            self.fail_count = 0;
            return true;
        }
        false
    }

    /// Functional form of [`update`](Self::update).
    pub fn updated(&self, y_batch_min: f64, y_incumbent: f64) -> (Self, bool) {
        let mut next = self.clone();
        let restart = next.update(y_batch_min, y_incumbent);
        (next, restart)
    }
}

/// `[center - L/2, center + L/2] ∩ domain`.
pub fn tr_box(state: &TrustRegionState, domain: &BoxBounds) -> BoxBounds {
    let half = vec![state.side_length / 2.0; state.center.len()];
    clipped_box(&state.center, &half, domain)
}

/// TuRBO's anisotropic box: half-widths `L ℓ_i / (2 (Π ℓ_j)^{1/D})`.
pub fn tr_box_weighted(state: &TrustRegionState, domain: &BoxBounds, lengthscales: &[f64]) -> BoxBounds {
    let d = lengthscales.len() as f64;
    let log_geo = lengthscales.iter().map(|l| l.ln()).sum::<f64>() / d;
    let half: Vec<f64> = lengthscales
        .iter()
        .map(|l| state.side_length * (l.ln() - log_geo).exp() / 2.0)
        .collect();
    clipped_box(&state.center, &half, domain)
}

fn clipped_box(center: &[f64], half: &[f64], domain: &BoxBounds) -> BoxBounds {
    let mut lower = Vec::with_capacity(center.len());
    let mut upper = Vec::with_capacity(center.len());
    for (i, (c, h)) in center.iter().zip(half).enumerate() {
        let (a, b) = (domain.lower[i], domain.upper[i]);
        let c = c.clamp(a, b);
        lower.push((c - h).max(a));
        upper.push((c + h).min(b));
    }
    BoxBounds { lower, upper }
}
