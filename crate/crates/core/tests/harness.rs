use adascale::benchmarks::BenchmarkName;
use adascale::harness::{
    read_traces_glob, run_experiment, summarize, BenchmarkSpec, ExperimentConfig, SUMMARY_CSV, SUMMARY_JSON,
};
use adascale::trust_region::VariantName;

fn config(dir: &std::path::Path) -> ExperimentConfig {
    let spec = BenchmarkSpec {
        name: BenchmarkName::Rastrigin,
        dim: 4,
        lengthscale: None,
        seed: 0,
    };
    let mut cfg = ExperimentConfig::new(
        spec,
        vec![VariantName::AdaScaleTurbo, VariantName::DScaledGlobal],
        50,
        dir,
    );
    cfg.n_replicates = 2;
    cfg
}

#[test]
fn one_trace_per_variant_and_replicate() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_experiment(&config(dir.path()), 2).unwrap();
    let traces: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("trace_"))
        .collect();
    assert_eq!(traces.len(), 4);
    for (_, _, rec) in &outcome.runs {
        assert_eq!(rec.rows.len(), 50);
    }
    let text = std::fs::read_to_string(dir.path().join("trace_adascale_turbo_r1.csv")).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.starts_with("iter,y,best_so_far,L_at_proposal,restart_flag,x_0,x_1,x_2,x_3\n"));
    assert!(dir.path().join(SUMMARY_CSV).exists() && dir.path().join(SUMMARY_JSON).exists());
}

#[test]
fn variants_share_the_initial_design() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let outcome = run_experiment(&cfg, 1).unwrap();
    for r in 0..cfg.n_replicates {
        let of = |v| {
            &outcome
                .runs
                .iter()
                .find(|(name, rep, _)| *name == v && *rep == r)
                .unwrap()
                .2
        };
        let (a, b) = (of(VariantName::AdaScaleTurbo), of(VariantName::DScaledGlobal));
        for i in 0..cfg.n_init {
            assert_eq!(a.rows[i].x, b.rows[i].x);
            assert_eq!(a.rows[i].y.to_bits(), b.rows[i].y.to_bits());
        }
        assert_ne!(a.rows[cfg.n_init].x, b.rows[cfg.n_init].x);
    }
}

#[test]
fn summaries_are_recomputable_from_traces() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_experiment(&config(dir.path()), 1).unwrap();
    let reread = read_traces_glob(&format!("{}/trace_*.csv", dir.path().display())).unwrap();
    assert_eq!(summarize(&reread).unwrap(), outcome.summary);
    let ada = outcome.summary.variant(VariantName::AdaScaleTurbo).unwrap();
    assert_eq!(ada.curve.len(), 50);
    assert!(ada.curve.iter().all(|s| s.n == 2));
}

#[test]
fn invalid_configs_are_rejected_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path());
    cfg.variants.clear();
    assert!(matches!(run_experiment(&cfg, 1), Err(adascale::Error::Config { .. })));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        ExperimentConfig::from_path(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 3);
}
