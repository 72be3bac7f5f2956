//! Run a plain GA on a rotated Rastrigin and print metrics every 16 generations.
//!
//!     cargo run --release --example quickstart

use std::sync::Arc;

use lqd::benchfn::{build_instance, FunctionId, NoiseSpec};
use lqd::competition::CompetitionFn;
use lqd::descriptor::{sample_projection, DescriptorSpec};
use lqd::evoloop::{run, LoopConfig};
use lqd::task::Task;

fn main() -> lqd::Result<()> {
    let inst = build_instance(FunctionId::Rastrigin, 4, NoiseSpec::default(), 1)?;
    let task = Task::Bbob(Arc::new(inst));
    let spec = DescriptorSpec::Projection(sample_projection(4, 2, 1)?);
    let cfg = LoopConfig { seed: 7, ..LoopConfig::default() };

    let traj = run(&cfg, &task, &spec, &CompetitionFn::Identity, 3)?;
    println!("gen  max_fitness  mean_novelty  qd_score");
    for m in traj.snapshots.iter().filter(|m| m.generation % 16 == 0) {
        println!("{:>3}  {:>11.4}  {:>12.4}  {:>8.2}", m.generation, m.max_fitness, m.mean_novelty, m.qd_score);
    }
    let pop = &traj.final_population;
    let best = (0..pop.len()).max_by(|&a, &b| pop.f[a].total_cmp(&pop.f[b])).unwrap();
    println!("best genotype {:?}", pop.x.row(best));
    Ok(())
}
