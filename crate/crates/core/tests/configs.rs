//! The sample configurations shipped in `configs/` parse and validate.

use std::path::PathBuf;

use lqd::expcli::ExperimentConfig;

#[test]
fn shipped_configs_load() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            if cfg.task.is_some() {
                cfg.validate_run().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            }
            if let Some(meta) = &cfg.meta {
                meta.validate().unwrap();
            }
            count += 1;
        }
    }
    assert!(count >= 5);
}

#[test]
fn readme_config_block_parses() {
    let readme = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    let start = readme.find("```toml\n").unwrap() + "```toml\n".len();
    let block = &readme[start..start + readme[start..].find("```").unwrap()];
    let cfg = ExperimentConfig::from_toml(block).unwrap_or_else(|e| panic!("{e}"));
    cfg.validate_run().unwrap();
    cfg.meta.unwrap().validate().unwrap();
}
