//! End-to-end acceptance checks. Each test prints one `criterion <id> PASS|FAIL` line.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use adascale::acquisition::log_ei;
use adascale::benchmarks::BenchmarkName;
use adascale::gp::{log_marginal_likelihood, GpModel, KernelParams};
use adascale::harness::{run_experiment, BenchmarkSpec, ExperimentConfig};
use adascale::mig::{
    distance_suite, expected_distance_bounds, independent_ig, scaling_suite, sobol_mig_curve, DISTANCE_DIMS,
    DISTANCE_SIDES,
};
use adascale::trust_region::{TrParams, TrustRegionState, VariantName};

fn report(id: &str, pass: bool, elapsed: Duration, detail: &str) {
    // straight to the process stdout so the line shows even when output is captured
    let line = format!(
        "criterion {id} {}: {detail} ({:.1}s)\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_distance_bounds() {
    let start = Instant::now();
    let cells = distance_suite(100_000, 0);
    let failing: Vec<String> = cells
        .iter()
        .filter(|c| !c.passes())
        .map(|c| format!("D={} L={}", c.dim, c.side_length))
        .collect();
    let (lo, hi) = expected_distance_bounds(100, 0.5);
    let oracle = (lo - 1.66667).abs() < 1e-4 && (hi - 2.0392).abs() < 1e-4;
    let elapsed = start.elapsed();
    let pass = failing.is_empty() && cells.len() == DISTANCE_DIMS.len() * DISTANCE_SIDES.len() && oracle;
    let detail = format!(
        "{} cells in bounds, D=100 L=0.5 bounds [{lo:.5}, {hi:.5}], failing {failing:?}",
        cells.len() - failing.len()
    );
    report("1", pass && elapsed < Duration::from_secs(30), elapsed, &detail);
}

#[test]
fn criterion_2_scaling_identity() {
    let start = Instant::now();
    let cells = scaling_suite(64, 0.3, 0).unwrap();
    let worst_gram = cells.iter().map(|c| c.check.max_abs_gram_diff).fold(0.0, f64::max);
    let worst_ig = cells
        .iter()
        .map(|c| (c.check.ig_global - c.check.ig_local).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let pass = cells.len() == 6 && worst_gram <= 1e-12 && worst_ig <= 1e-10;
    report(
        "2",
        pass && elapsed < Duration::from_secs(10),
        elapsed,
        &format!("max |K-K'| {worst_gram:.1e}, max |ΔIG| {worst_ig:.1e} nats"),
    );
}

const SIDES: [f64; 4] = [0.8, 0.4, 0.2, 0.1];

fn figure_curves() -> Vec<Vec<f64>> {
    let grid: Vec<usize> = (1..=200).collect();
    SIDES
        .iter()
        .map(|&l| {
            let c = sobol_mig_curve(100, l, 0.5, 0.01, &grid, None).unwrap();
            c.points.iter().map(|p| p.ig).collect()
        })
        .collect()
}

#[test]
fn criterion_3a_ordering() {
    let start = Instant::now();
    let curves = figure_curves();
    let violations = (0..200)
        .filter(|&i| !(curves[0][i] >= curves[1][i] && curves[1][i] >= curves[2][i] && curves[2][i] >= curves[3][i]))
        .count();
    report(
        "3a",
        violations == 0,
        start.elapsed(),
        &format!("IG(0.8) >= IG(0.4) >= IG(0.2) >= IG(0.1) violated at {violations} of 200 sizes"),
    );
}

#[test]
fn criterion_3b_large_region_is_nearly_independent() {
    let start = Instant::now();
    let curves = figure_curves();
    let worst = (0..200)
        .map(|i| curves[0][i] / independent_ig(i + 1, 0.01))
        .fold(f64::INFINITY, f64::min);
    report(
        "3b",
        worst >= 0.9,
        start.elapsed(),
        &format!("min over N of IG(L=0.8)/independent = {worst:.6} (need >= 0.9)"),
    );
}

#[test]
fn criterion_3c_small_region_deviates() {
    let start = Instant::now();
    let curves = figure_curves();
    let ratio = curves[3][199] / independent_ig(200, 0.01);
    report(
        "3c",
        ratio <= 0.6,
        start.elapsed(),
        &format!("IG(L=0.1, N=200)/independent = {ratio:.6} (need <= 0.6)"),
    );
}

#[test]
fn criterion_4_gp_numerics() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (n, d) = (20, 5);
        let xs: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random()).collect()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let ls: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..2.0)).collect();
        let p = KernelParams::new(ls, rng.random_range(0.5..2.0), rng.random_range(1e-3..1e-1)).unwrap();
        let g = log_marginal_likelihood(&p, &xs, &y).unwrap().grad;
        // central differences in log-parameter space
        let h = 1e-5;
        for (k, gk) in g.iter().enumerate() {
            let value_at = |s: f64| {
                let mut q = p.clone();
                match k {
                    k if k < d => q.lengthscales[k] *= s.exp(),
                    k if k == d => q.noise_variance *= s.exp(),
                    _ => q.signal_variance *= s.exp(),
                }
                log_marginal_likelihood(&q, &xs, &y).unwrap().value
            };
            let fd = (value_at(h) - value_at(-h)) / (2.0 * h);
            worst = worst.max((gk - fd).abs() / fd.abs().max(1e-2));
        }
    }
    let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 10.0, (i * i) as f64 / 100.0]).collect();
    let y: Vec<f64> = xs.iter().map(|x| (3.0 * x[0]).sin() + x[1]).collect();
    let model = GpModel::new(
        xs.clone(),
        y.clone(),
        KernelParams::new(vec![0.3, 0.3], 1.0, 1e-6).unwrap(),
    )
    .unwrap();
    let (mean, _) = model.posterior(&xs);
    let interp = mean.iter().zip(&y).map(|(m, t)| (m - t).abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let pass = worst <= 1e-4 && interp <= 1e-3 && elapsed < Duration::from_secs(10);
    report(
        "4",
        pass,
        elapsed,
        &format!("worst gradient rel. error {worst:.1e}, worst interpolation error {interp:.1e}"),
    );
}

fn direct_ei(mean: f64, std: f64, best: f64) -> f64 {
    let z = (best - mean) / std;
    let cdf = 0.5 * libm::erfc(-z / std::f64::consts::SQRT_2);
    let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    (best - mean) * cdf + std * pdf
}

#[test]
fn criterion_5_log_ei() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..=60 {
        let z = -3.0 + 0.1 * i as f64;
        for j in 0..=40 {
            let std = 10f64.powf(-3.0 + 0.1 * j as f64);
            let mean = -z * std;
            let direct = direct_ei(mean, std, 0.0);
            worst = worst.max((log_ei(mean, std, 0.0).exp() - direct).abs() / direct);
        }
    }
    let deep = log_ei(30.0, 1.0, 0.0);
    let tail = log_ei(5.0, 1.0, 0.0);
    let elapsed = start.elapsed();
    let pass = worst <= 1e-6 && deep.is_finite() && (tail - -16.745).abs() < 1e-3 && elapsed < Duration::from_secs(1);
    report(
        "5",
        pass,
        elapsed,
        &format!("grid rel. error {worst:.1e}, log_ei(z=-30) = {deep:.3}, log_ei(z=-5) = {tail:.5}"),
    );
}

#[test]
fn criterion_6_state_machine() {
    let start = Instant::now();
    let mut checks = Vec::new();
    let p = TrParams::turbo_defaults(50, 1);
    checks.push((
        "defaults",
        p.l_init == 0.8 && p.l_max == 1.6 && p.l_min == 0.0078125 && p.tau_succ == 3,
    ));
    checks.push((
        "tau_fail",
        p.tau_fail == 50 && TrParams::turbo_defaults(2, 1).tau_fail == 4,
    ));
    checks.push(("tau_fail batch", TrParams::turbo_defaults(10, 4).tau_fail == 3));

    let mut s = TrustRegionState::new(vec![0.5; 50], p);
    for k in 1..=3 {
        s.update(1.0 - k as f64, 2.0 - k as f64);
    }
    checks.push(("doubling", s.side_length == 1.6 && s.succ_count == 0));
    for k in 1..=6 {
        s.update(-10.0 - k as f64, -9.0 - k as f64);
    }
    checks.push(("cap", s.side_length == 1.6));

    let mut s = TrustRegionState::new(vec![0.5; 50], p);
    for _ in 0..49 {
        s.update(1.0, 1.0);
    }
    checks.push(("no early halving", s.side_length == 0.8 && s.fail_count == 49));
    s.update(1.0, 1.0);
    checks.push(("halving", s.side_length == 0.4 && s.fail_count == 0));

    let mut s = TrustRegionState::new(vec![0.5; 2], TrParams::turbo_defaults(2, 1));
    let mut restarts = Vec::new();
    for i in 0..4 * 7 + 3 {
        if s.update(1.0, 1.0) {
            restarts.push(i);
        }
    }
    checks.push((
        "restart below l_min",
        restarts == vec![4 * 7 - 1] && s.side_length == 0.8,
    ));

    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let elapsed = start.elapsed();
    report(
        "6",
        failed.is_empty() && elapsed < Duration::from_secs(1),
        elapsed,
        &format!("{} transition checks, failing {failed:?}", checks.len()),
    );
}

fn rastrigin_experiment(dir: &Path, l_init: Option<f64>) -> ExperimentConfig {
    let spec = BenchmarkSpec {
        name: BenchmarkName::Rastrigin,
        dim: 50,
        lengthscale: None,
        seed: 0,
    };
    let mut cfg = ExperimentConfig::new(spec, vec![VariantName::AdaScaleTurbo, VariantName::TurboMle], 300, dir);
    cfg.n_replicates = 5;
    cfg.l_init = l_init;
    cfg
}

fn directional_check(id: &str, l_init: Option<f64>) {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_experiment(&rastrigin_experiment(dir.path(), l_init), 5).unwrap();
    let ada = &outcome.summary.variant(VariantName::AdaScaleTurbo).unwrap().final_stats;
    let mle = &outcome.summary.variant(VariantName::TurboMle).unwrap().final_stats;
    let elapsed = start.elapsed();
    let pass = ada.n == 5 && mle.n == 5 && ada.median < mle.median && elapsed < Duration::from_secs(30 * 60);
    report(
        id,
        pass,
        elapsed,
        &format!(
            "median final best AdaScale-TuRBO {:.3} vs TuRBO-MLE {:.3} (L0 = {})",
            ada.median,
            mle.median,
            l_init.unwrap_or(0.8)
        ),
    );
}

#[test]
fn criterion_7_rastrigin_50() {
    directional_check("7", None);
}

#[test]
fn criterion_8_ablation_l0() {
    let accepted = [0.8, 0.4, 0.2].iter().all(|&l| {
        let text = format!(
            "[benchmark]\nname = \"rastrigin\"\ndim = 50\n[experiment]\nvariants = [\"adascale_turbo\"]\n\
             budget = 300\nl_init = {l}\noutput_dir = \"unused\"\n"
        );
        ExperimentConfig::from_toml_str(&text).is_ok_and(|c| c.run_config(0).tr.l_init == l)
    });
    assert!(accepted, "L0 overrides rejected");
    directional_check("8", Some(0.4));
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_9_reproducible_artifacts() {
    let start = Instant::now();
    let spec = BenchmarkSpec {
        name: BenchmarkName::Schwefel,
        dim: 8,
        lengthscale: None,
        seed: 0,
    };
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut outputs = Vec::new();
    for (dir, jobs) in dirs.iter().zip([1, 3]) {
        let mut cfg = ExperimentConfig::new(spec.clone(), VariantName::ALL.to_vec(), 40, dir.path());
        cfg.n_replicates = 2;
        cfg.base_seed = 11;
        run_experiment(&cfg, jobs).unwrap();
        outputs.push(read_dir_bytes(dir.path()));
    }
    let expected_files = 4 * 2 + 3;
    let pass = outputs[0].len() == expected_files && outputs[0] == outputs[1];
    report(
        "9",
        pass,
        start.elapsed(),
        &format!(
            "{} files compared byte for byte across reruns (1 and 3 workers)",
            outputs[0].len()
        ),
    );
}
