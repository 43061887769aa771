//! Trust-region Bayesian optimization for high-dimensional black-box problems.
//!
//! The crate is organized bottom-up:
//!
//! - [`numerics`]: Cholesky with jitter, Sobol sequences, a bound-constrained
//!   L-BFGS minimizer and stable standard-normal log functions.
//! - [`gp`]: the ARD Matérn-5/2 kernel, exact GP regression, the log marginal
//!   likelihood with its gradient, and random-feature prior samples.
//! - [`hyperfit`]: LogNormal lengthscale priors and MLE/MAP hyperparameter fits.
//! - [`acquisition`]: log expected improvement and its multi-start optimization.
//! - [`trust_region`]: the TuRBO-1 state machine and the optimizer loops
//!   (AdaScale-TuRBO, TuRBO-MLE, D-scaled TuRBO, D-scaled global BO).
//! - [`mig`]: information gain diagnostics and the distance/scaling checks.
//! - [`benchmarks`]: synthetic test functions on the normalized unit cube.
//! - [`harness`]: experiment configs, replicated runs, traces and summaries.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acquisition;
pub mod benchmarks;
pub mod error;
pub mod gp;
pub mod harness;
pub mod hyperfit;
pub mod mig;
pub mod numerics;
pub mod trust_region;

pub use error::{Error, Result};
