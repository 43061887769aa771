use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::benchmarks::{Benchmark, BenchmarkName};
use crate::trust_region::{RunConfig, VariantName};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub name: BenchmarkName,
    pub dim: usize,
    /// Lengthscale of a GP prior sample objective.
    pub lengthscale: Option<f64>,
    /// Seed of a GP prior sample objective.
    pub seed: u64,
}

impl BenchmarkSpec {
    pub fn build(&self) -> Result<Benchmark> {
        match self.name {
            BenchmarkName::GpPriorSample => Benchmark::gp_prior_sample(
                self.dim,
                self.lengthscale.unwrap_or(DEFAULT_SAMPLE_LENGTHSCALE),
                self.seed,
            ),
            name => Benchmark::new(name, self.dim),
        }
    }
}

const DEFAULT_SAMPLE_LENGTHSCALE: f64 = 0.5;

/// One experiment: a benchmark, the variants to compare and the replication protocol.
///
/// Loaded from TOML:
///
/// ```toml
/// [benchmark]
/// name = "rastrigin"
/// dim = 50
///
/// [experiment]
/// variants = ["adascale_turbo", "turbo_mle"]
/// budget = 300
/// n_replicates = 5
/// base_seed = 0
/// output_dir = "results/rastrigin50"
/// ```
///
/// Optional keys: `benchmark.lengthscale`, `benchmark.seed` (GP prior samples),
/// `experiment.n_init` (10), `experiment.refit_every` (10),
/// `experiment.n_replicates` (10), `experiment.base_seed` (0) and
/// `experiment.l_init` (initial trust-region side length).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub benchmark: BenchmarkSpec,
    pub variants: Vec<VariantName>,
    pub budget: usize,
    pub n_init: usize,
    pub refit_every: usize,
    pub n_replicates: usize,
    pub base_seed: u64,
    pub l_init: Option<f64>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(
        benchmark: BenchmarkSpec,
        variants: Vec<VariantName>,
        budget: usize,
        output_dir: impl Into<PathBuf>,
    ) -> Self {
        ExperimentConfig {
            benchmark,
            variants,
            budget,
            n_init: 10,
            refit_every: 10,
            n_replicates: 10,
            base_seed: 0,
            l_init: None,
            output_dir: output_dir.into(),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let root: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::config("<file>", e.message()))?;
        let mut root = Fields::new("", root);
        let mut bench = Fields::new("benchmark", root.table("benchmark")?);
        let mut exp = Fields::new("experiment", root.table("experiment")?);
        root.finish()?;

        let name_key = bench.key("name");
        let name: BenchmarkName = bench
            .string("name")?
            .parse()
            .map_err(|_| Error::config(name_key, "unknown benchmark"))?;
        let benchmark = BenchmarkSpec {
            name,
            dim: bench.count("dim")?,
            lengthscale: bench.opt_float("lengthscale")?,
            seed: bench.opt_count("seed")?.unwrap_or(0) as u64,
        };
        bench.finish()?;

        let variants_key = exp.key("variants");
        let variants = exp
            .strings("variants")?
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::config(&variants_key, format!("unknown variant `{s}`")))
            })
            .collect::<Result<Vec<VariantName>>>()?;
        let mut cfg = ExperimentConfig::new(benchmark, variants, exp.count("budget")?, exp.string("output_dir")?);
        if let Some(v) = exp.opt_count("n_init")? {
            cfg.n_init = v;
        }
        if let Some(v) = exp.opt_count("refit_every")? {
            cfg.refit_every = v;
        }
        if let Some(v) = exp.opt_count("n_replicates")? {
            cfg.n_replicates = v;
        }
        if let Some(v) = exp.opt_count("base_seed")? {
            cfg.base_seed = v as u64;
        }
        cfg.l_init = exp.opt_float("l_init")?;
        exp.finish()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.benchmark;
        if b.dim == 0 {
            return Err(Error::config("benchmark.dim", "must be at least 1"));
        }
        match (b.name, b.lengthscale) {
            (BenchmarkName::GpPriorSample, Some(l)) if !(l > 0.0 && l.is_finite()) => {
                return Err(Error::config("benchmark.lengthscale", "must be positive"));
            }
            (BenchmarkName::GpPriorSample, _) => {}
            (_, Some(_)) => {
                return Err(Error::config(
                    "benchmark.lengthscale",
                    "only applies to gp_prior_sample",
                ));
            }
            _ => {}
        }
        if self.variants.is_empty() {
            return Err(Error::config("experiment.variants", "list at least one variant"));
        }
        if self.variants.iter().collect::<BTreeSet<_>>().len() != self.variants.len() {
            return Err(Error::config("experiment.variants", "variants must be distinct"));
        }
        if self.n_init == 0 {
            return Err(Error::config("experiment.n_init", "must be at least 1"));
        }
        if self.budget <= self.n_init {
            return Err(Error::config(
                "experiment.budget",
                format!("budget {} must exceed n_init {}", self.budget, self.n_init),
            ));
        }
        if self.refit_every == 0 {
            return Err(Error::config("experiment.refit_every", "must be at least 1"));
        }
        if self.n_replicates == 0 {
            return Err(Error::config("experiment.n_replicates", "must be at least 1"));
        }
        if let Some(l) = self.l_init {
            let tr = RunConfig::new(b.dim, self.budget, 0).tr;
            if !(l >= tr.l_min && l <= tr.l_max) {
                return Err(Error::config(
                    "experiment.l_init",
                    format!("{l} outside [{}, {}]", tr.l_min, tr.l_max),
                ));
            }
        }
        Ok(())
    }

    /// Optimizer settings of replicate `r`, whose seed is `base_seed + r`.
    pub fn run_config(&self, replicate: usize) -> RunConfig {
        let mut rc = RunConfig::new(self.benchmark.dim, self.budget, self.base_seed + replicate as u64);
        rc.n_init = self.n_init;
        rc.refit_every = self.refit_every;
        if let Some(l) = self.l_init {
            rc = rc.with_l_init(l);
        }
        rc
    }
}

/// A TOML table being consumed key by key, so leftovers can be reported.
struct Fields {
    prefix: &'static str,
    table: Table,
}

impl Fields {
    fn new(prefix: &'static str, table: Table) -> Self {
        Fields { prefix, table }
    }

    fn key(&self, name: &str) -> String {
        if self.prefix.is_empty() {
            name.to_string()
        } else {
            format!("{}.{name}", self.prefix)
        }
    }

    fn take(&mut self, name: &str) -> Result<Value> {
        self.table
            .remove(name)
            .ok_or_else(|| Error::config(self.key(name), "missing"))
    }

    fn table(&mut self, name: &str) -> Result<Table> {
        match self.take(name)? {
            Value::Table(t) => Ok(t),
            _ => Err(Error::config(self.key(name), "expected a table")),
        }
    }

    fn string(&mut self, name: &str) -> Result<String> {
        match self.take(name)? {
            Value::String(s) => Ok(s),
            _ => Err(Error::config(self.key(name), "expected a string")),
        }
    }

    fn strings(&mut self, name: &str) -> Result<Vec<String>> {
        let key = self.key(name);
        match self.take(name)? {
            Value::Array(items) => items
                .into_iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s),
                    _ => Err(Error::config(&key, "expected an array of strings")),
                })
                .collect(),
            _ => Err(Error::config(key, "expected an array of strings")),
        }
    }

    fn count(&mut self, name: &str) -> Result<usize> {
        let v = self.take(name)?;
        self.as_count(name, v)
    }

    fn opt_count(&mut self, name: &str) -> Result<Option<usize>> {
        match self.table.remove(name) {
            Some(v) => self.as_count(name, v).map(Some),
            None => Ok(None),
        }
    }

    fn as_count(&self, name: &str, v: Value) -> Result<usize> {
        match v {
            Value::Integer(i) if i >= 0 => Ok(i as usize),
            _ => Err(Error::config(self.key(name), "expected a nonnegative integer")),
        }
    }

    fn opt_float(&mut self, name: &str) -> Result<Option<f64>> {
        match self.table.remove(name) {
            Some(Value::Float(f)) => Ok(Some(f)),
            Some(Value::Integer(i)) => Ok(Some(i as f64)),
            Some(_) => Err(Error::config(self.key(name), "expected a number")),
            None => Ok(None),
        }
    }

    fn finish(self) -> Result<()> {
        match self.table.keys().next() {
            Some(k) => Err(Error::config(self.key(k), "unknown key")),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[benchmark]
name = "rastrigin"
dim = 50

[experiment]
variants = ["adascale_turbo", "turbo_mle"]
budget = 300
n_replicates = 5
base_seed = 7
l_init = 0.4
output_dir = "out"
"#;

    fn key_of(text: &str) -> String {
        match ExperimentConfig::from_toml_str(text) {
            Err(Error::Config { key, .. }) => key,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::from_toml_str(GOOD).unwrap();
        assert_eq!(cfg.benchmark.name, BenchmarkName::Rastrigin);
        assert_eq!(cfg.variants, vec![VariantName::AdaScaleTurbo, VariantName::TurboMle]);
        assert_eq!((cfg.n_init, cfg.refit_every, cfg.n_replicates), (10, 10, 5));
        let rc = cfg.run_config(2);
        assert_eq!(rc.seed, 9);
        assert_eq!(rc.tr.l_init, 0.4);
        assert_eq!(rc.budget, 300);
    }

    #[test]
    fn errors_name_the_key() {
        assert_eq!(
            key_of(&GOOD.replace("dim = 50", "dim = 50\ncolor = 1")),
            "benchmark.color"
        );
        assert_eq!(
            key_of(&GOOD.replace("budget = 300", "budget = 10")),
            "experiment.budget"
        );
        assert_eq!(key_of(&GOOD.replace("budget = 300", "")), "experiment.budget");
        assert_eq!(key_of(&GOOD.replace("\"turbo_mle\"", "\"ucb\"")), "experiment.variants");
        assert_eq!(key_of(&GOOD.replace("rastrigin", "ackley")), "benchmark.name");
        assert_eq!(
            key_of(&GOOD.replace("n_replicates = 5", "n_replicates = 0")),
            "experiment.n_replicates"
        );
        assert_eq!(
            key_of(&GOOD.replace("l_init = 0.4", "l_init = 3.0")),
            "experiment.l_init"
        );
        assert_eq!(key_of(&GOOD.replace("dim = 50", "dim = \"fifty\"")), "benchmark.dim");
        assert_eq!(key_of(&format!("{GOOD}\n[extra]\n")), "extra");
        assert_eq!(key_of("not toml ["), "<file>");
    }

    #[test]
    fn gp_sample_benchmark() {
        let text = GOOD.replace(
            "name = \"rastrigin\"",
            "name = \"gp_prior_sample\"\nlengthscale = 0.2\nseed = 4",
        );
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        let b = cfg.benchmark.build().unwrap();
        assert_eq!(b.name, BenchmarkName::GpPriorSample);
        assert_eq!(
            key_of(&GOOD.replace("dim = 50", "dim = 50\nlengthscale = 0.2")),
            "benchmark.lengthscale"
        );
    }
}
