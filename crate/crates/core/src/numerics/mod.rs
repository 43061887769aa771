//! Numerical building blocks shared by the GP, acquisition and analysis code.

mod cholesky;
mod lbfgsb;
mod normal;
mod sobol;

pub use cholesky::{cholesky_logdet, CholFactor, DEFAULT_JITTER, MAX_JITTER};
pub use lbfgsb::{bounded_minimize, finite_difference, BoxBounds, MinimizeConfig, Minimum};
pub(crate) use normal::mills_ratio_parts as normal_mills_parts;
pub use normal::{log_mills_ratio, std_normal_logs, LN_SQRT_2PI};
pub use sobol::{sobol_sequence, SOBOL_MAX_DIM};
