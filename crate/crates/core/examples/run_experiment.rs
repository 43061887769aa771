//! A replicated experiment from a TOML config, written to a temporary
//! directory, then summarized again from the trace files alone.

use adascale::harness::{read_traces_glob, run_experiment, summarize, ExperimentConfig};

const CONFIG: &str = r#"
[benchmark]
name = "michalewicz"
dim = 6

[experiment]
variants = ["adascale_turbo", "turbo_mle", "dscaled_global"]
budget = 40
n_replicates = 3
base_seed = 100
output_dir = "PLACEHOLDER"
"#;

fn main() -> adascale::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let dir = std::env::temp_dir().join("adascale_run_experiment_example");
    let cfg = ExperimentConfig::from_toml_str(&CONFIG.replace("PLACEHOLDER", &dir.display().to_string()))?;
    let outcome = run_experiment(&cfg, 2)?;
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    for v in &outcome.summary.variants {
        let s = &v.final_stats;
        println!(
            "{:<16} median {:.4}  se {:.4}  IQR [{:.4}, {:.4}]",
            v.variant.as_str(),
            s.median,
            s.std_error,
            s.q25,
            s.q75
        );
    }

    let again = summarize(&read_traces_glob(&format!("{}/trace_*.csv", dir.display()))?)?;
    println!("summary recomputed from traces matches: {}", again == outcome.summary);
    Ok(())
}
