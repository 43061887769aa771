//! Exact Gaussian-process regression with an ARD Matérn-5/2 kernel.

mod kernel;
mod mll;
mod model;
mod prior_sample;

pub use kernel::{cross_covariance, gram, matern52_ard, matern52_profile, KernelParams, MIN_NOISE};
pub use mll::{log_marginal_likelihood, log_marginal_likelihood_cached, MllValue, PairwiseSq};
pub use model::{GpModel, Prediction, Standardizer};
pub use prior_sample::{sample_prior_objective, PriorSampleObjective, DEFAULT_FEATURES};
