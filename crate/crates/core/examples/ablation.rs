//! Descriptor ablation: the same learned competition fed projection
//! descriptors versus pure noise, with the GA as reference. The learned
//! parameters here are a random initialization, so this shows the
//! mechanics; point `theta` at a `meta-train` output for a real study.
//!
//!     cargo run --release --example ablation

use lqd::expcli::{cmd_ablation, save_theta, ExperimentConfig, ThetaFile, ABLATION_ARMS, THETA_FORMAT};
use lqd::lqdnet::{init_params, NetConfig};
use lqd::stats::median;

fn main() -> lqd::Result<()> {
    let dir = std::env::temp_dir().join("lqd-ablation-example");
    let theta = dir.join("theta.json");
    std::fs::create_dir_all(&dir).map_err(|e| lqd::Error::io(&dir, e))?;
    save_theta(
        &theta,
        &ThetaFile {
            format: THETA_FORMAT.into(),
            objective: None,
            config_hash: String::new(),
            meta_gen: 0,
            params: init_params(NetConfig::default(), 2, 1)?,
        },
    )?;

    let text = format!(
        r#"
seed = 1
replications = 6
output_dir = "{out}"

[task]
kind = "bbob"
function = "rastrigin"
dim = 4

[algorithm]
kind = "lqd"
theta = "{theta}"

[loop]
pop_size = 64
batch_size = 16
generations = 64

[descriptor]
kind = "projection"
"#,
        out = dir.join("runs").display(),
        theta = theta.display()
    );
    let cfg = ExperimentConfig::from_toml(&text)?;
    for (arm, records) in ABLATION_ARMS.iter().zip(cmd_ablation(&cfg)?) {
        let fit: Vec<f64> = records.iter().map(|r| r.rows.last().unwrap().max_fitness).collect();
        let nov: Vec<f64> = records.iter().map(|r| r.rows.last().unwrap().mean_novelty).collect();
        println!("{arm:>17}: median max_fitness {:>8.3}, median novelty {:.4}", median(&fit), median(&nov));
    }
    println!("per-replication CSVs under {}", dir.join("runs").display());
    Ok(())
}
