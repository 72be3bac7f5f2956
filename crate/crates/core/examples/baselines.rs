//! Every hand-designed competition on the same task, several seeds each,
//! followed by pairwise rank-sum tests on final max fitness and novelty.
//!
//!     cargo run --release --example baselines

use std::sync::Arc;

use lqd::benchfn::{build_instance, FunctionId, NoiseSpec};
use lqd::competition::{build_centroids, CompetitionFn};
use lqd::descriptor::{sample_projection, DescriptorSpec};
use lqd::evoloop::{run, LoopConfig};
use lqd::expcli::compare_samples;
use lqd::stats::median;
use lqd::task::Task;

const SEEDS: u64 = 8;

fn main() -> lqd::Result<()> {
    let inst = build_instance(FunctionId::Rastrigin, 2, NoiseSpec::default(), 0)?;
    let task = Task::Bbob(Arc::new(inst));
    let spec = DescriptorSpec::Projection(sample_projection(2, 2, 0)?);
    let centroids = build_centroids(128, &task.descriptor_bounds(&spec), 0)?;
    let algs = [
        ("ga", CompetitionFn::Identity),
        ("random", CompetitionFn::Random),
        ("map_elites", CompetitionFn::MapElites(Arc::new(centroids))),
        ("novelty", CompetitionFn::Novelty { k: 3 }),
        ("dominated_novelty", CompetitionFn::DominatedNovelty { k: 3 }),
    ];

    let mut fitness = Vec::new();
    let mut novelty = Vec::new();
    for (name, comp) in &algs {
        let (mut f, mut n) = (Vec::new(), Vec::new());
        for seed in 0..SEEDS {
            let cfg = LoopConfig { seed, ..LoopConfig::default() };
            let last = run(&cfg, &task, &spec, comp, 3)?.snapshots.pop().unwrap();
            f.push(last.max_fitness);
            n.push(last.mean_novelty);
        }
        println!("{name:>18}: median max_fitness {:>9.4}, median novelty {:.4}", median(&f), median(&n));
        fitness.push((name.to_string(), f));
        novelty.push((name.to_string(), n));
    }

    for (label, samples) in [("max_fitness", &fitness), ("mean_novelty", &novelty)] {
        println!("\n{label}: Holm-adjusted p-values");
        for c in compare_samples(samples)? {
            println!("  {:>18} vs {:<18} p = {:.4}", c.a, c.b, c.p_holm);
        }
    }
    Ok(())
}
