//! Log expected improvement (minimization convention) and its optimization
//! over a box.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::GpModel;
use crate::numerics::{bounded_minimize, sobol_sequence, std_normal_logs, BoxBounds, MinimizeConfig};

const TAIL_SWITCH: f64 = -6.0;
// posterior variances below this are treated as this value while optimizing
const VARIANCE_FLOOR: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcqOptConfig {
    pub n_raw: usize,
    pub n_starts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for AcqOptConfig {
    fn default() -> Self {
        AcqOptConfig {
            n_raw: 20,
            n_starts: 5,
            max_iter: 20,
            tol: 1e-6,
        }
    }
}

/// `log(φ(z) + z Φ(z))`, stable for very negative `z`.
pub fn log_h(z: f64) -> f64 {
    if z >= TAIL_SWITCH {
        let (lp, lc) = std_normal_logs(z);
        (lp.exp() + z * lc.exp()).ln()
    } else {
        // φ(z) + zΦ(z) = φ(x) (1 - x R(x)) = φ(x) t R(x), x = -z
        let (r, t) = crate::numerics::normal_mills_parts(-z);
        let (lp, _) = std_normal_logs(z);
        lp + t.ln() + r.ln()
    }
}

/// `log EI` for a Gaussian prediction `N(mean, std²)` against incumbent `best`,
/// where improvement means going below `best`.
pub fn log_ei(mean: f64, std: f64, best: f64) -> f64 {
    if std <= 0.0 {
        let imp = best - mean;
        return if imp > 0.0 { imp.ln() } else { f64::NEG_INFINITY };
    }
    let z = (best - mean) / std;
    std.ln() + log_h(z)
}

/// `log EI` together with its partial derivatives w.r.t. the mean and std.
fn log_ei_with_partials(mean: f64, std: f64, best: f64) -> (f64, f64, f64) {
    let z = (best - mean) / std;
    let lh = log_h(z);
    let (lp, lc) = std_normal_logs(z);
    let d_mean = -(lc - lh).exp() / std;
    let d_std = (lp - lh).exp() / std;
    (std.ln() + lh, d_mean, d_std)
}

/// Posterior `log EI` at one point, with its input gradient.
pub fn log_ei_at(model: &GpModel, best: f64, x: &[f64]) -> (f64, Vec<f64>) {
    let p = model.predict_with_gradient(x);
    let var = p.variance.max(VARIANCE_FLOOR);
    let std = var.sqrt();
    let (v, dm, ds) = log_ei_with_partials(p.mean, std, best);
    let grad = p
        .mean_grad
        .iter()
        .zip(&p.variance_grad)
        .map(|(gm, gv)| dm * gm + ds * gv / (2.0 * std))
        .collect();
    (v, grad)
}

fn log_ei_value(model: &GpModel, best: f64, x: &[f64]) -> f64 {
    let (mean, var) = model.posterior(std::slice::from_ref(&x.to_vec()));
    log_ei(mean[0], var[0].max(VARIANCE_FLOOR).sqrt(), best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    pub x: Vec<f64>,
    pub log_ei: f64,
}

/// Scores `n_raw` Sobol points in `bounds`, refines the best `n_starts` with
/// the bounded quasi-Newton method, and returns the best refined point.
/// Ties go to the lower raw index.
pub fn optimize_acq(
    model: &GpModel,
    best: f64,
    bounds: &BoxBounds,
    config: &AcqOptConfig,
    seed: u64,
) -> Result<Proposal> {
    if config.n_raw == 0 || config.n_starts == 0 || config.n_starts > config.n_raw {
        return Err(Error::InvalidInput(format!(
            "need 0 < n_starts <= n_raw, got {} and {}",
            config.n_starts, config.n_raw
        )));
    }
    if bounds.dim() != model.dim() {
        return Err(Error::InvalidInput(format!(
            "box of dimension {} for a {}-dimensional model",
            bounds.dim(),
            model.dim()
        )));
    }
    let raw: Vec<Vec<f64>> = sobol_sequence(config.n_raw, bounds.dim(), seed, true)?
        .iter()
        .map(|z| bounds.from_unit(z))
        .collect();
    let scores: Vec<f64> = raw.iter().map(|x| log_ei_value(model, best, x)).collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let opt = MinimizeConfig::new(config.max_iter, config.tol);
    let refined: Vec<Proposal> = order[..config.n_starts]
        .par_iter()
        .map(|&i| {
            let start = Proposal {
                x: raw[i].clone(),
                log_ei: scores[i],
            };
            let objective = |x: &[f64], g: &mut [f64]| {
                let (v, grad) = log_ei_at(model, best, x);
                for (gi, v) in g.iter_mut().zip(grad) {
                    *gi = -v;
                }
                -v
            };
            match bounded_minimize(objective, bounds, &raw[i], &opt) {
                Ok(m) if -m.f >= start.log_ei => Proposal { x: m.x, log_ei: -m.f },
                _ => start,
            }
        })
        .collect();

    let mut winner = refined[0].clone();
    for p in refined.into_iter().skip(1) {
        if p.log_ei > winner.log_ei {
            winner = p;
        }
    }
    Ok(winner)
}
