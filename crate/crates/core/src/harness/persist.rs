//! CSV and JSON artifacts. Floats are written with 17 significant digits so
//! every value reads back bit-for-bit.

use std::io::{Read, Write};
use std::path::Path;

use crate::mig::{independent_ig, DistanceCell, MigCurve, ScalingCell};
use crate::trust_region::{RunRecord, RunRow, VariantName};
use crate::{Error, Result};

use super::summary::SummaryTable;

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_file_name(variant: VariantName, replicate: usize) -> String {
    format!("trace_{}_r{replicate}.csv", variant.as_str())
}

/// Inverse of [`trace_file_name`].
pub fn parse_trace_file_name(path: &Path) -> Option<(VariantName, usize)> {
    let stem = path
        .file_name()?
        .to_str()?
        .strip_prefix("trace_")?
        .strip_suffix(".csv")?;
    let (variant, rep) = stem.rsplit_once("_r")?;
    Some((variant.parse().ok()?, rep.parse().ok()?))
}

pub fn write_trace<W: Write>(out: W, record: &RunRecord) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["iter", "y", "best_so_far", "L_at_proposal", "restart_flag"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((0..record.dim).map(|i| format!("x_{i}")));
    w.write_record(&header)?;
    for row in &record.rows {
        let mut fields = vec![
            row.index.to_string(),
            fmt_float(row.y),
            fmt_float(row.best_so_far),
            fmt_float(row.side_length),
            u8::from(row.restart_flag).to_string(),
        ];
        fields.extend(row.x.iter().map(|v| fmt_float(*v)));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trace written by [`write_trace`]. The record's seed is set to
/// `replicate`; only the ordering of seeds matters to [`super::summarize`].
pub fn read_trace<R: Read>(input: R, variant: VariantName, replicate: usize) -> Result<RunRecord> {
    let mut r = csv::Reader::from_reader(input);
    let dim = r.headers()?.len().saturating_sub(5);
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| Error::InvalidInput(format!("trace row {line}: bad {what}"));
        let float = |i: usize, what: &str| rec.get(i).and_then(|s| s.parse::<f64>().ok()).ok_or_else(|| bad(what));
        rows.push(RunRow {
            index: rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(|| bad("iter"))?,
            y: float(1, "y")?,
            best_so_far: float(2, "best_so_far")?,
            side_length: float(3, "L_at_proposal")?,
            restart_flag: match rec.get(4) {
                Some("0") => false,
                Some("1") => true,
                _ => return Err(bad("restart_flag")),
            },
            x: (0..dim).map(|i| float(5 + i, "x")).collect::<Result<_>>()?,
        });
    }
    Ok(RunRecord {
        seed: replicate as u64,
        variant,
        dim,
        rows,
        valid: true,
    })
}

/// Loads every trace matching a glob pattern, in path order.
pub fn read_traces_glob(pattern: &str) -> Result<Vec<RunRecord>> {
    let paths = glob::glob(pattern).map_err(|e| Error::InvalidInput(format!("pattern `{pattern}`: {e}")))?;
    let mut records = Vec::new();
    for path in paths {
        let path = path.map_err(|e| Error::Io(e.into()))?;
        let (variant, rep) = parse_trace_file_name(&path)
            .ok_or_else(|| Error::InvalidInput(format!("{} is not a trace file name", path.display())))?;
        records.push(read_trace(std::fs::File::open(&path)?, variant, rep)?);
    }
    if records.is_empty() {
        return Err(Error::InvalidInput(format!("no traces match `{pattern}`")));
    }
    Ok(records)
}

/// Convergence curves: one row per (variant, iteration) of best-so-far statistics.
pub fn write_summary_csv<W: Write>(out: W, table: &SummaryTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variant", "iter", "n", "median", "std_error", "mean", "q25", "q75"])?;
    for v in &table.variants {
        for (iter, s) in v.curve.iter().enumerate() {
            w.write_record([
                v.variant.as_str().to_string(),
                iter.to_string(),
                s.n.to_string(),
                fmt_float(s.median),
                fmt_float(s.std_error),
                fmt_float(s.mean),
                fmt_float(s.q25),
                fmt_float(s.q75),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Final-best value of every replicate (violin data).
pub fn write_final_best_csv<W: Write>(out: W, table: &SummaryTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variant", "replicate", "final_best"])?;
    for v in &table.variants {
        for (r, y) in v.final_best.iter().enumerate() {
            w.write_record([v.variant.as_str().to_string(), r.to_string(), fmt_float(*y)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_json<W: Write>(mut out: W, table: &SummaryTable) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, table)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_mig_csv<W: Write>(out: W, curves: &[MigCurve]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "D",
        "L",
        "lengthscale",
        "noise_variance",
        "N",
        "ig_nats",
        "ig_independent_nats",
    ])?;
    for c in curves {
        for p in &c.points {
            w.write_record([
                c.dim.to_string(),
                fmt_float(c.side_length),
                fmt_float(c.lengthscale),
                fmt_float(c.noise_variance),
                p.n.to_string(),
                fmt_float(p.ig),
                fmt_float(independent_ig(p.n, c.noise_variance)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Both verification sweeps in one long table; cells a suite does not use stay empty.
pub fn write_props_csv<W: Write>(out: W, distance: &[DistanceCell], scaling: &[ScalingCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "suite",
        "D",
        "L",
        "N",
        "estimate",
        "std_error",
        "lower",
        "upper",
        "gram_max_abs_diff",
        "ig_global",
        "ig_local",
        "pass",
    ])?;
    for c in distance {
        w.write_record([
            "distance".to_string(),
            c.dim.to_string(),
            fmt_float(c.side_length),
            String::new(),
            fmt_float(c.estimate),
            fmt_float(c.std_error),
            fmt_float(c.lower),
            fmt_float(c.upper),
            String::new(),
            String::new(),
            String::new(),
            c.passes().to_string(),
        ])?;
    }
    for c in scaling {
        w.write_record([
            "scaling".to_string(),
            c.dim.to_string(),
            fmt_float(c.side_length),
            c.n.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            fmt_float(c.check.max_abs_gram_diff),
            fmt_float(c.check.ig_global),
            fmt_float(c.check.ig_local),
            c.passes().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> RunRecord {
        let rows = (0..4)
            .map(|i| RunRow {
                index: i,
                x: vec![0.1 * i as f64, 1.0 / 3.0],
                y: 10.0 / (i + 1) as f64,
                best_so_far: 10.0 / (i + 1) as f64,
                side_length: 0.8,
                restart_flag: i == 2,
            })
            .collect();
        RunRecord {
            seed: 3,
            variant: VariantName::TurboMle,
            dim: 2,
            rows,
            valid: true,
        }
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(fmt_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn trace_round_trip() {
        let rec = record();
        let mut buf = Vec::new();
        write_trace(&mut buf, &rec).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("iter,y,best_so_far,L_at_proposal,restart_flag,x_0,x_1\n"));
        let back = read_trace(buf.as_slice(), VariantName::TurboMle, 3).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn file_names() {
        let name = trace_file_name(VariantName::DScaledGlobal, 12);
        assert_eq!(name, "trace_dscaled_global_r12.csv");
        assert_eq!(
            parse_trace_file_name(Path::new(&format!("some/dir/{name}"))),
            Some((VariantName::DScaledGlobal, 12))
        );
        assert_eq!(parse_trace_file_name(Path::new("summary.csv")), None);
    }
}
