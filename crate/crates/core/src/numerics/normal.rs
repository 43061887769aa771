use std::f64::consts::FRAC_1_SQRT_2;

use libm::erfc;

/// `ln √(2π)`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const TAIL_SWITCH: f64 = -6.0;
const CF_TERMS: usize = 120;

/// Log density and log CDF of the standard normal at `z`.
///
/// Below `z = -6` the CDF is computed from the Mills ratio so the result
/// stays finite far into the tail.
pub fn std_normal_logs(z: f64) -> (f64, f64) {
    let log_pdf = -0.5 * z * z - LN_SQRT_2PI;
    let log_cdf = if z < TAIL_SWITCH {
        log_pdf + log_mills_ratio(-z)
    } else if z <= 0.0 {
        (0.5 * erfc(-z * FRAC_1_SQRT_2)).ln()
    } else {
        (-0.5 * erfc(z * FRAC_1_SQRT_2)).ln_1p()
    };
    (log_pdf, log_cdf)
}

/// `ln R(x)` with `R(x) = Φ(-x) / φ(x)`, for `x ≥ 6`.
pub fn log_mills_ratio(x: f64) -> f64 {
    let (r, _) = mills_ratio_parts(x);
    r.ln()
}

/// Laplace continued fraction `R(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...))))`.
///
/// Returns `(R, t)` where `t = 1/(x + 2/(x + 3/(x + ...)))`, so that
/// `R = 1/(x + t)` and `1 - x R = t R` without cancellation.
pub(crate) fn mills_ratio_parts(x: f64) -> (f64, f64) {
    let mut u = 0.0;
    for k in (2..=CF_TERMS).rev() {
        u = k as f64 / (x + u);
    }
    let t = 1.0 / (x + u);
    (1.0 / (x + t), t)
}
