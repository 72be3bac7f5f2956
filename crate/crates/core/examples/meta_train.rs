//! Meta-train a competition network with sep-CMA-ES over sampled benchmark
//! tasks, checkpointing halfway and resuming, then test the result on fresh
//! tasks against its own initialization and the GA.
//!
//!     cargo run --release --example meta_train -- [meta_generations]

use std::sync::Arc;

use lqd::competition::CompetitionFn;
use lqd::lqdnet::LqdModel;
use lqd::metaopt::{
    normalize_aggregate, sample_task_batch, score_grid, MetaCheckpoint, MetaConfig, MetaTrainer,
    Normalization,
};
use lqd::rng::tag;

fn main() -> lqd::Result<()> {
    let gens: usize = std::env::args().nth(1).and_then(|v| v.parse().ok()).unwrap_or(40);
    let cfg = MetaConfig { generations: gens, dims: [2, 4], validate_every: 10, seed: 5, ..MetaConfig::default() };

    let dir = std::env::temp_dir().join("lqd-meta-example");
    std::fs::create_dir_all(&dir).map_err(|e| lqd::Error::io(&dir, e))?;
    let ck_path = dir.join("checkpoint.json");

    let mut trainer = MetaTrainer::new(cfg.clone())?;
    println!("meta_gen  mean_meta_fitness  best_meta_fitness  sigma");
    while trainer.meta_gen() < (gens / 2) as u64 {
        let row = trainer.step()?;
        println!("{:>8}  {:>17.4}  {:>17.4}  {:.4}", row.meta_gen, row.mean_meta_fitness, row.best_meta_fitness, row.sigma);
    }
    trainer.checkpoint().save(&ck_path)?;
    drop(trainer);

    let mut trainer = MetaTrainer::from_checkpoint(cfg.clone(), MetaCheckpoint::load(&ck_path)?)?;
    println!("-- resumed from {}", ck_path.display());
    while !trainer.is_done() {
        let row = trainer.step()?;
        println!("{:>8}  {:>17.4}  {:>17.4}  {:.4}", row.meta_gen, row.mean_meta_fitness, row.best_meta_fitness, row.sigma);
    }
    let out = trainer.finish()?;
    println!("selected parameters from meta-generation {}", out.best_meta_gen);

    let test = sample_task_batch(&cfg, &[tag::HELD_OUT], 16)?;
    let learned = |p| CompetitionFn::Learned(Arc::new(LqdModel::new(p).unwrap()));
    let comps = [learned(out.initial.clone()), learned(out.best.clone()), CompetitionFn::Identity];
    let grid = score_grid(&comps, &test, &cfg.objective)?;
    let agg = normalize_aggregate(&grid, Normalization::ZScore);
    println!("held-out z-scored meta-fitness: init {:.3}  trained {:.3}  ga {:.3}", agg[0], agg[1], agg[2]);
    Ok(())
}
