//! The benchmark suite: every function, its minimum dimension, the value at a
//! few random points of one instance, and how each noise model perturbs it.
//!
//!     cargo run --release --example benchmarks

use lqd::benchfn::{build_instance, evaluate, list_functions, FunctionSet, NoiseKind, NoiseSpec};
use lqd::rng::stream;
use rand::Rng;

fn main() -> lqd::Result<()> {
    let mut r = stream(0);
    for (set, label) in [(FunctionSet::Training, "training"), (FunctionSet::Ood, "held-out")] {
        println!("{label} functions");
        for &f in list_functions(set) {
            let n = f.min_dim().max(3);
            let inst = build_instance(f, n, NoiseSpec::default(), 0)?;
            let vals: Vec<String> = (0..3)
                .map(|_| {
                    let x: Vec<f64> = (0..n).map(|_| r.gen_range(-5.0..5.0)).collect();
                    format!("{:>12.3}", inst.fitness_noiseless(&x))
                })
                .collect();
            println!("  {:<28} n>={} {}", f.name(), f.min_dim(), vals.join(" "));
        }
    }

    let base = build_instance(list_functions(FunctionSet::Training)[0], 3, NoiseSpec::default(), 0)?;
    let x = [1.0, -2.0, 0.5];
    println!("\nnoise on {} at {x:?}: noiseless {:.4}", base.function.name(), base.fitness_noiseless(&x));
    for kind in [NoiseKind::Uniform, NoiseKind::Gaussian, NoiseKind::Cauchy] {
        let mut inst = base.clone();
        inst.noise = NoiseSpec::new(kind, 0.05);
        let draws: Vec<f64> = (0..5).map(|_| evaluate(&inst, &x, &mut r)).collect::<lqd::Result<_>>()?;
        println!("  {kind:?}: {:?}", draws.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
    }
    Ok(())
}
