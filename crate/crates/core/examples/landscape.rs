//! Competition-fitness landscapes: evolve a population, then ask what score a
//! newcomer of median fitness would get at each point of the descriptor
//! plane under novelty, dominated novelty and MAP-Elites. Printed as ASCII
//! shading (darker = higher score).
//!
//!     cargo run --release --example landscape

use std::sync::Arc;

use lqd::benchfn::{build_instance, FunctionId, NoiseSpec};
use lqd::competition::{build_centroids, CompetitionFn};
use lqd::descriptor::{sample_projection, DescriptorSpec};
use lqd::evoloop::{run, LoopConfig};
use lqd::expcli::landscape_grid;
use lqd::task::Task;

const RES: usize = 24;

fn shade(grid: &[[f64; 3]]) {
    let vals: Vec<f64> = grid.iter().map(|g| g[2]).filter(|v| v.is_finite()).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ramp = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for iy in (0..RES).rev() {
        let line: String = (0..RES)
            .map(|ix| {
                let v = grid[ix * RES + iy][2];
                if !v.is_finite() {
                    ' '
                } else {
                    let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
                    ramp[((t * 9.0).round() as usize).min(9)]
                }
            })
            .collect();
        println!("  |{line}|");
    }
}

fn main() -> lqd::Result<()> {
    let inst = build_instance(FunctionId::Schwefel, 2, NoiseSpec::default(), 4)?;
    let task = Task::Bbob(Arc::new(inst));
    let spec = DescriptorSpec::Projection(sample_projection(2, 2, 4)?);
    let cfg = LoopConfig { pop_size: 64, generations: 128, seed: 4, ..LoopConfig::default() };
    let pop = run(&cfg, &task, &spec, &CompetitionFn::DominatedNovelty { k: 3 }, 3)?.final_population;

    let cells = build_centroids(64, &task.descriptor_bounds(&spec), 4)?;
    for (name, comp) in [
        ("novelty", CompetitionFn::Novelty { k: 3 }),
        ("dominated_novelty", CompetitionFn::DominatedNovelty { k: 3 }),
        ("map_elites", CompetitionFn::MapElites(Arc::new(cells))),
    ] {
        println!("{name}");
        shade(&landscape_grid(&comp, &pop, RES, 0.1, 0)?);
    }
    Ok(())
}
