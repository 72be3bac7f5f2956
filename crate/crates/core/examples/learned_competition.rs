//! The learned competition network as a standalone function: feature
//! standardization, identity parameters and a randomly initialized network
//! applied to one population, and the survivors each would keep.
//!
//!     cargo run --release --example learned_competition

use lqd::evoloop::truncate;
use lqd::lqdnet::{featurize, forward_competition, identity_params, init_params, NetConfig};
use lqd::matrix::Matrix;
use lqd::rng::stream;
use rand::Rng;

fn main() -> lqd::Result<()> {
    let mut r = stream(3);
    let n = 12;
    let f: Vec<f64> = (0..n).map(|_| r.gen_range(-10.0..0.0)).collect();
    let d = Matrix::from_vec(n, 2, (0..2 * n).map(|_| r.gen_range(-1.0..1.0)).collect());

    let cfg = NetConfig::default();
    println!("parameters for 2-D descriptors: {}", cfg.param_count(2));

    let z = featurize(&f, &d);
    println!("standardized features (first 3 rows):");
    for i in 0..3 {
        println!("  {:?}", z.row(i).iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    }

    let ident = forward_competition(&identity_params(cfg, 2)?, &f, &d)?;
    let random = forward_competition(&init_params(cfg, 2, 11)?, &f, &d)?;
    println!("\n  i   fitness   identity    random-init");
    for i in 0..n {
        println!("{i:>3}  {:>8.3}  {:>9.4}  {:>12.6}", f[i], ident[i], random[i]);
    }
    let mut by_fitness = truncate(&f, n / 2);
    let mut by_ident = truncate(&ident, n / 2);
    let mut by_random = truncate(&random, n / 2);
    by_fitness.sort_unstable();
    by_ident.sort_unstable();
    by_random.sort_unstable();
    println!("\nsurvivors by raw fitness {by_fitness:?}");
    println!("survivors, identity net  {by_ident:?}");
    println!("survivors, random net    {by_random:?}");
    Ok(())
}
