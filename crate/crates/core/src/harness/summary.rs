use serde::{Deserialize, Serialize};

use crate::trust_region::{RunRecord, VariantName};
use crate::{Error, Result};

use super::stats::Stats;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantSummary {
    pub variant: VariantName,
    pub n_replicates: usize,
    /// Best-so-far statistics after each evaluation.
    pub curve: Vec<Stats>,
    /// Final best of each replicate, in seed order.
    pub final_best: Vec<f64>,
    pub final_stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub variants: Vec<VariantSummary>,
    pub warnings: Vec<String>,
}

impl SummaryTable {
    pub fn variant(&self, name: VariantName) -> Option<&VariantSummary> {
        self.variants.iter().find(|v| v.variant == name)
    }
}

/// Groups traces by variant and computes per-iteration and final statistics.
///
/// Every trace must have the same number of rows.
pub fn summarize(traces: &[RunRecord]) -> Result<SummaryTable> {
    let len = traces
        .first()
        .ok_or_else(|| Error::MismatchedTraces("no traces".into()))?
        .rows
        .len();
    if len == 0 {
        return Err(Error::MismatchedTraces("traces are empty".into()));
    }
    if let Some(t) = traces.iter().find(|t| t.rows.len() != len) {
        return Err(Error::MismatchedTraces(format!(
            "{} seed {} has {} rows, expected {len}",
            t.variant,
            t.seed,
            t.rows.len()
        )));
    }
    let mut warnings = Vec::new();
    let mut variants = Vec::new();
    for name in VariantName::ALL {
        let mut group: Vec<&RunRecord> = traces.iter().filter(|t| t.variant == name).collect();
        if group.is_empty() {
            continue;
        }
        group.sort_by_key(|t| t.seed);
        if group.len() == 1 {
            warnings.push(format!("{name}: single replicate, standard error reported as 0"));
        }
        for t in group.iter().filter(|t| !t.valid) {
            warnings.push(format!("{name}: seed {} is a partial run", t.seed));
        }
        let curve = (0..len)
            .map(|i| Stats::of(&group.iter().map(|t| t.rows[i].best_so_far).collect::<Vec<_>>()))
            .collect();
        let final_best: Vec<f64> = group.iter().map(|t| t.rows[len - 1].best_so_far).collect();
        variants.push(VariantSummary {
            variant: name,
            n_replicates: group.len(),
            curve,
            final_stats: Stats::of(&final_best),
            final_best,
        });
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(SummaryTable { variants, warnings })
}
