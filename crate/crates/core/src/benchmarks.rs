//! Synthetic test functions. The optimizers always work on `[0, 1]^D`; each
//! function maps that cube affinely onto its native box before evaluating.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::{sample_prior_objective, PriorSampleObjective, DEFAULT_FEATURES};
use crate::numerics::BoxBounds;

const SCHWEFEL_OFFSET: f64 = 418.9829;
const MICHALEWICZ_M: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkName {
    Schwefel,
    Rastrigin,
    Michalewicz,
    GpPriorSample,
    /// `Σ (x_i - 0.5)²` on `[0, 1]^D`; a smoke test, not one of the reported benchmarks.
    Sphere,
}

impl BenchmarkName {
    pub fn as_str(&self) -> &'static str {
        match self {
            BenchmarkName::Schwefel => "schwefel",
            BenchmarkName::Rastrigin => "rastrigin",
            BenchmarkName::Michalewicz => "michalewicz",
            BenchmarkName::GpPriorSample => "gp_prior_sample",
            BenchmarkName::Sphere => "sphere",
        }
    }
}

impl fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "schwefel" => Ok(BenchmarkName::Schwefel),
            "rastrigin" => Ok(BenchmarkName::Rastrigin),
            "michalewicz" => Ok(BenchmarkName::Michalewicz),
            "gp_prior_sample" | "gp_prior" | "gp-prior" => Ok(BenchmarkName::GpPriorSample),
            "sphere" => Ok(BenchmarkName::Sphere),
            other => Err(Error::InvalidInput(format!("unknown benchmark `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub name: BenchmarkName,
    pub dim: usize,
    pub native_bounds: BoxBounds,
    sample: Option<PriorSampleObjective>,
}

impl Benchmark {
    pub fn new(name: BenchmarkName, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("benchmark dimension must be positive".into()));
        }
        let native_bounds = match name {
            BenchmarkName::Schwefel => BoxBounds::uniform(dim, -500.0, 500.0),
            BenchmarkName::Rastrigin => BoxBounds::uniform(dim, -5.12, 5.12),
            BenchmarkName::Michalewicz => BoxBounds::uniform(dim, 0.0, PI),
            BenchmarkName::Sphere => BoxBounds::unit(dim),
            BenchmarkName::GpPriorSample => {
                return Err(Error::InvalidInput(
                    "gp_prior_sample needs a lengthscale and seed; use Benchmark::gp_prior_sample".into(),
                ))
            }
        };
        Ok(Benchmark {
            name,
            dim,
            native_bounds,
            sample: None,
        })
    }

    /// Isotropic Matérn-5/2 prior sample on `[0, 1]^D`.
    pub fn gp_prior_sample(dim: usize, lengthscale: f64, seed: u64) -> Result<Self> {
        if dim == 0 || !(lengthscale > 0.0) {
            return Err(Error::InvalidInput(format!(
                "gp_prior_sample needs dim > 0 and lengthscale > 0 (got {dim}, {lengthscale})"
            )));
        }
        Ok(Benchmark {
            name: BenchmarkName::GpPriorSample,
            dim,
            native_bounds: BoxBounds::unit(dim),
            sample: Some(sample_prior_objective(dim, lengthscale, DEFAULT_FEATURES, seed)),
        })
    }

    pub fn prior_sample(&self) -> Option<&PriorSampleObjective> {
        self.sample.as_ref()
    }

    /// Evaluates at a point of the normalized cube.
    pub fn evaluate(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "point of dimension {} for a {}-dimensional benchmark",
                z.len(),
                self.dim
            )));
        }
        let x = to_native(z, &self.native_bounds)?;
        Ok(self.evaluate_native(&x))
    }

    /// Evaluates at a point given in native coordinates.
    pub fn evaluate_native(&self, x: &[f64]) -> f64 {
        match self.name {
            BenchmarkName::Schwefel => schwefel(x),
            BenchmarkName::Rastrigin => rastrigin(x),
            BenchmarkName::Michalewicz => michalewicz(x),
            BenchmarkName::Sphere => x.iter().map(|v| (v - 0.5).powi(2)).sum(),
            BenchmarkName::GpPriorSample => self.sample.as_ref().map_or(f64::NAN, |s| s.evaluate(x)),
        }
    }
}

/// `x = a + (b - a) ⊙ z` for `z ∈ [0, 1]^D`.
pub fn to_native(z: &[f64], bounds: &BoxBounds) -> Result<Vec<f64>> {
    if let Some((index, &value)) = z.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OutOfDomain { index, value });
    }
    Ok(z.iter()
        .zip(bounds.lower.iter().zip(&bounds.upper))
        .map(|(t, (a, b))| a + (b - a) * t)
        .collect())
}

pub fn schwefel(x: &[f64]) -> f64 {
    SCHWEFEL_OFFSET * x.len() as f64 - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

pub fn michalewicz(x: &[f64]) -> f64 {
    -x.iter()
        .enumerate()
        .map(|(i, v)| v.sin() * ((i + 1) as f64 * v * v / PI).sin().powi(2 * MICHALEWICZ_M))
        .sum::<f64>()
}
