use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use super::state::{tr_box, tr_box_weighted, TrParams, TrustRegionState};
use crate::acquisition::{optimize_acq, AcqOptConfig};
use crate::benchmarks::Benchmark;
use crate::error::{Error, Result};
use crate::gp::{GpModel, KernelParams, Standardizer};
use crate::hyperfit::{fit_from, make_prior, FitConfig, FitMode, LengthscalePrior, PriorKind};
use crate::numerics::{sobol_sequence, BoxBounds};

/// A black-box function on `[0, 1]^D`. Non-finite values count as failures.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, z: &[f64]) -> f64;
}

impl Objective for Benchmark {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, z: &[f64]) -> f64 {
        Benchmark::evaluate(self, z).unwrap_or(f64::NAN)
    }
}

/// Wraps a closure as an [`Objective`].
pub struct FnObjective<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, z: &[f64]) -> f64 {
        (self.f)(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    AdaScaleTurbo,
    TurboMle,
    DScaledTurbo,
    DScaledGlobal,
}

impl VariantName {
    pub const ALL: [VariantName; 4] = [
        VariantName::AdaScaleTurbo,
        VariantName::TurboMle,
        VariantName::DScaledTurbo,
        VariantName::DScaledGlobal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            VariantName::AdaScaleTurbo => "adascale_turbo",
            VariantName::TurboMle => "turbo_mle",
            VariantName::DScaledTurbo => "dscaled_turbo",
            VariantName::DScaledGlobal => "dscaled_global",
        }
    }
}

impl fmt::Display for VariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VariantName::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variant `{s}`")))
    }
}

/// Which prior, which fitting mode, and whether a trust region is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizerVariant {
    pub name: VariantName,
    pub prior_kind: PriorKind,
    pub fit_mode: FitMode,
}

impl OptimizerVariant {
    pub fn new(name: VariantName) -> Self {
        let (prior_kind, fit_mode) = match name {
            VariantName::AdaScaleTurbo => (PriorKind::AdaScale, FitMode::Map),
            VariantName::TurboMle => (PriorKind::None, FitMode::Mle),
            VariantName::DScaledTurbo | VariantName::DScaledGlobal => (PriorKind::DScaled, FitMode::Map),
        };
        OptimizerVariant {
            name,
            prior_kind,
            fit_mode,
        }
    }

    pub fn uses_trust_region(&self) -> bool {
        self.name != VariantName::DScaledGlobal
    }

    fn fit_config(&self, base: &RunConfig) -> FitConfig {
        let mut c = match self.fit_mode {
            FitMode::Mle => FitConfig::mle(),
            FitMode::Map => FitConfig::map(),
        };
        c.n_restarts = base.fit_restarts;
        c.max_iter = base.fit_max_iter;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub budget: usize,
    pub n_init: usize,
    pub refit_every: usize,
    pub seed: u64,
    pub tr: TrParams,
    /// Only enters the failure tolerance; proposals are sequential.
    pub batch_size: usize,
    pub acq: AcqOptConfig,
    pub fit_restarts: usize,
    pub fit_max_iter: usize,
    /// Use TuRBO's lengthscale-weighted box instead of the plain hypercube.
    pub weighted_box: bool,
}

impl RunConfig {
    pub fn new(d: usize, budget: usize, seed: u64) -> Self {
        RunConfig {
            budget,
            n_init: 10,
            refit_every: 10,
            seed,
            tr: TrParams::turbo_defaults(d, 1),
            batch_size: 1,
            acq: AcqOptConfig::default(),
            fit_restarts: 4,
            fit_max_iter: 100,
            weighted_box: false,
        }
    }

    pub fn with_l_init(mut self, l_init: f64) -> Self {
        self.tr.l_init = l_init;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub index: usize,
    pub x: Vec<f64>,
    pub y: f64,
    pub best_so_far: f64,
    /// Trust-region side length in effect when the point was chosen.
    pub side_length: f64,
    /// Set on the evaluation whose outcome triggered a restart.
    pub restart_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub variant: VariantName,
    pub dim: usize,
    pub rows: Vec<RunRow>,
    /// False when the objective failed and the run was cut short.
    pub valid: bool,
}

impl RunRecord {
    pub fn best(&self) -> Option<f64> {
        self.rows.last().map(|r| r.best_so_far)
    }
}

/// Things that happen inside a run, for instrumentation.
#[derive(Debug, Clone)]
pub enum RunEvent<'a> {
    Refit {
        evaluations: usize,
        side_length: f64,
        prior: &'a LengthscalePrior,
        params: &'a KernelParams,
    },
    Proposal {
        evaluations: usize,
        search_box: &'a BoxBounds,
    },
    Restart {
        evaluations: usize,
    },
}

pub fn run_optimizer(objective: &dyn Objective, variant: OptimizerVariant, config: &RunConfig) -> Result<RunRecord> {
    run_optimizer_observed(objective, variant, config, &mut |_| {})
}

// splitmix64 over (seed, stream, counter)
fn derive_seed(seed: u64, stream: u64, counter: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(counter.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const STREAM_DESIGN: u64 = 1;
const STREAM_ACQ: u64 = 2;
const STREAM_FIT: u64 = 3;

struct Loop<'a> {
    objective: &'a dyn Objective,
    variant: OptimizerVariant,
    config: &'a RunConfig,
    fit_config: FitConfig,
    domain: BoxBounds,
    record: RunRecord,
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
    params: Option<KernelParams>,
    state: TrustRegionState,
    best: f64,
}

impl Loop<'_> {
    fn evaluations(&self) -> usize {
        self.record.rows.len()
    }

    /// Evaluates and records one point; `false` if the objective failed.
    fn evaluate(&mut self, x: Vec<f64>, side_length: f64) -> bool {
        let y = self.objective.evaluate(&x);
        if !y.is_finite() {
            warn!("objective returned {y} at evaluation {}", self.evaluations());
            self.record.valid = false;
            return false;
        }
        self.best = self.best.min(y);
        self.record.rows.push(RunRow {
            index: self.evaluations(),
            x: x.clone(),
            y,
            best_so_far: self.best,
            side_length,
            restart_flag: false,
        });
        self.xs.push(x);
        self.ys.push(y);
        true
    }

    fn initial_design(&mut self, restart_index: u64) -> Result<bool> {
        let remaining = self.config.budget - self.evaluations();
        let n = self.config.n_init.min(remaining);
        let seed = derive_seed(self.config.seed, STREAM_DESIGN, restart_index);
        self.xs.clear();
        self.ys.clear();
        let side = self.recorded_side_length();
        for x in sobol_sequence(n, self.domain.dim(), seed, true)? {
            if !self.evaluate(x, side) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn recorded_side_length(&self) -> f64 {
        if self.variant.uses_trust_region() {
            self.state.side_length
        } else {
            1.0
        }
    }

    fn prior(&self) -> Result<LengthscalePrior> {
        make_prior(self.variant.prior_kind, self.domain.dim(), self.state.side_length)
    }

    fn refit(&mut self, observer: &mut dyn FnMut(&RunEvent)) -> Result<()> {
        let prior = self.prior()?;
        let y = Standardizer::fit(&self.ys).apply(&self.ys);
        let seed = derive_seed(self.config.seed, STREAM_FIT, self.evaluations() as u64);
        match fit_from(&self.xs, &y, &self.fit_config, &prior, seed, self.params.as_ref()) {
            Ok(p) => self.params = Some(p),
            Err(Error::FitFailed) if self.params.is_some() => {
                warn!(
                    "hyperparameter fit failed at {} evaluations; keeping previous",
                    self.evaluations()
                );
            }
            Err(e) => return Err(e),
        }
        let params = self.params.as_ref().expect("fitted above");
        debug!(
            "{} refit at n={} L={:.5}: mean lengthscale {:.4}",
            self.variant.name,
            self.evaluations(),
            self.state.side_length,
            params.lengthscales.iter().sum::<f64>() / params.dim() as f64
        );
        observer(&RunEvent::Refit {
            evaluations: self.evaluations(),
            side_length: self.state.side_length,
            prior: &prior,
            params,
        });
        Ok(())
    }

    fn incumbent(&self) -> usize {
        let mut best = 0;
        for (i, y) in self.ys.iter().enumerate() {
            if *y < self.ys[best] {
                best = i;
            }
        }
        best
    }
}

/// Runs one optimizer until `budget` evaluations have been spent.
///
/// Initial and restart designs are scrambled Sobol draws seeded only by
/// `config.seed` and the restart count, so every variant started from the
/// same seed sees the same initial design.
pub fn run_optimizer_observed(
    objective: &dyn Objective,
    variant: OptimizerVariant,
    config: &RunConfig,
    observer: &mut dyn FnMut(&RunEvent),
) -> Result<RunRecord> {
    let d = objective.dim();
    if config.n_init == 0 || config.budget <= config.n_init {
        return Err(Error::InvalidInput(format!(
            "budget {} must exceed n_init {} > 0",
            config.budget, config.n_init
        )));
    }
    if config.refit_every == 0 {
        return Err(Error::InvalidInput("refit_every must be at least 1".into()));
    }
    let tr = config.tr;
    if !(tr.l_min > 0.0 && tr.l_min <= tr.l_init && tr.l_init <= tr.l_max) {
        return Err(Error::InvalidTrustRegion(tr.l_init));
    }
    let domain = BoxBounds::unit(d);
    let mut lp = Loop {
        objective,
        variant,
        config,
        fit_config: variant.fit_config(config),
        record: RunRecord {
            seed: config.seed,
            variant: variant.name,
            dim: d,
            rows: Vec::with_capacity(config.budget),
            valid: true,
        },
        xs: Vec::new(),
        ys: Vec::new(),
        params: None,
        state: TrustRegionState::new(vec![0.5; d], tr),
        domain,
        best: f64::INFINITY,
    };

    let mut restarts = 0u64;
    if !lp.initial_design(restarts)? {
        return Ok(lp.record);
    }
    lp.refit(observer)?;
    let mut since_refit = 0;

    while lp.evaluations() < config.budget {
        let inc = lp.incumbent();
        let y_inc = lp.ys[inc];
        lp.state.center = lp.xs[inc].clone();
        let params = lp.params.clone().expect("model fitted before the loop");
        let search_box = if !variant.uses_trust_region() {
            lp.domain.clone()
        } else if config.weighted_box {
            tr_box_weighted(&lp.state, &lp.domain, &params.lengthscales)
        } else {
            tr_box(&lp.state, &lp.domain)
        };
        observer(&RunEvent::Proposal {
            evaluations: lp.evaluations(),
            search_box: &search_box,
        });

        let scaler = Standardizer::fit(&lp.ys);
        let model = GpModel::new(lp.xs.clone(), scaler.apply(&lp.ys), params)?;
        let acq_seed = derive_seed(config.seed, STREAM_ACQ, lp.evaluations() as u64);
        let proposal = optimize_acq(&model, scaler.forward(y_inc), &search_box, &config.acq, acq_seed)?;

        let side = lp.recorded_side_length();
        if !lp.evaluate(proposal.x, side) {
            return Ok(lp.record);
        }
        let y_new = *lp.ys.last().expect("just evaluated");
        since_refit += 1;
        if since_refit >= config.refit_every {
            lp.refit(observer)?;
            since_refit = 0;
        }

        if variant.uses_trust_region() && lp.state.update(y_new, y_inc) {
            restarts += 1;
            lp.record.rows.last_mut().expect("row exists").restart_flag = true;
            observer(&RunEvent::Restart {
                evaluations: lp.evaluations(),
            });
            debug!("{} restart #{restarts} at n={}", variant.name, lp.evaluations());
            if lp.evaluations() >= config.budget {
                break;
            }
            if !lp.initial_design(restarts)? {
                return Ok(lp.record);
            }
            lp.refit(observer)?;
            since_refit = 0;
        }
    }
    Ok(lp.record)
}
