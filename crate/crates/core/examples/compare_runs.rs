//! The file-based workflow behind `lqd run` and `lqd compare`: write two
//! run directories from TOML configs, then compare their final-generation
//! metrics with rank-sum tests.
//!
//!     cargo run --release --example compare_runs

use lqd::expcli::{cmd_compare, cmd_run, render_comparison, ExperimentConfig};

const BASE: &str = r#"
seed = 21
replications = 8

[task]
kind = "bbob"
function = "rastrigin"
dim = 2

[loop]
generations = 128

[descriptor]
kind = "projection"
"#;

fn main() -> lqd::Result<()> {
    let root = std::env::temp_dir().join("lqd-compare-example");
    let mut dirs = Vec::new();
    for alg in ["ga", "novelty_search", "dominated_novelty"] {
        let dir = root.join(alg);
        let text = format!("output_dir = \"{}\"\n{BASE}\n[algorithm]\nkind = \"{alg}\"\n", dir.display());
        let cfg = ExperimentConfig::from_toml(&text)?;
        let recs = cmd_run(&cfg)?;
        println!("{alg}: {} replications -> {}", recs.len(), dir.display());
        dirs.push(dir);
    }
    for metric in ["max_fitness", "mean_novelty"] {
        println!();
        print!("{}", render_comparison(&cmd_compare(&dirs, metric)?, metric));
    }
    Ok(())
}
