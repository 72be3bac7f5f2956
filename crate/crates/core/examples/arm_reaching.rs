//! The planar redundant arm: fitness is the (negated) spread of the joint
//! angles, the descriptor is where the hand ends up. Compares the GA with
//! dominated novelty on both best fitness and reach coverage.
//!
//!     cargo run --release --example arm_reaching

use lqd::armtask::ArmSpec;
use lqd::competition::CompetitionFn;
use lqd::descriptor::DescriptorSpec;
use lqd::evoloop::{run, LoopConfig};
use lqd::task::Task;

/// Fraction of a 20×20 grid over the unit disk's bounding box that some
/// individual's hand position falls into.
fn coverage(d: &lqd::matrix::Matrix) -> f64 {
    let mut seen = [[false; 20]; 20];
    for row in d.iter_rows() {
        let c = |v: f64| (((v + 1.0) / 2.0 * 20.0) as usize).min(19);
        seen[c(row[0])][c(row[1])] = true;
    }
    seen.iter().flatten().filter(|&&s| s).count() as f64 / 400.0
}

fn main() -> lqd::Result<()> {
    let arm = ArmSpec::default();
    let (fit, hand) = arm.evaluate(&[0.5; 8])?;
    println!("straight arm: fitness {fit}, hand at {hand:?}");

    let task = Task::Arm(arm);
    let spec = DescriptorSpec::TaskSpecific { dim: 2 };
    let cfg = LoopConfig { generations: 512, seed: 2, ..LoopConfig::default() };
    for (name, comp) in [("ga", CompetitionFn::Identity), ("dominated_novelty", CompetitionFn::DominatedNovelty { k: 3 })] {
        let traj = run(&cfg, &task, &spec, &comp, 3)?;
        let last = traj.snapshots.last().unwrap();
        println!(
            "{name:>18}: max fitness {:.4}, mean novelty {:.4}, grid coverage {:.1}%",
            last.max_fitness,
            last.mean_novelty,
            100.0 * coverage(&traj.final_population.d)
        );
    }
    Ok(())
}
