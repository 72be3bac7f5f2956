//! Black-box benchmark functions.
//!
//! The 22 training functions follow the noiseless BBOB definitions (Finck et
//! al.), the six out-of-distribution functions are the two Gallagher peak
//! functions plus Ackley, Dixon-Price, Salomon and Levy. All functions are
//! exposed in maximization form: `fitness(x) = -(f_raw(x) - f_opt)`, so the
//! optimum of every noise-free instance has fitness exactly zero.

mod bbob;
mod noise;
mod ood;
pub mod transforms;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{self, Stream};

pub use noise::{apply_noise, NoiseKind, NoiseSpec};

/// Lower and upper bound of the search box in every coordinate.
pub const BOX_LOW: f64 = -5.0;
pub const BOX_HIGH: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionId {
    // separable
    Sphere,
    EllipsoidalSeparable,
    RastriginSeparable,
    BucheRastrigin,
    LinearSlope,
    // low or moderate conditioning
    AttractiveSector,
    StepEllipsoidal,
    Rosenbrock,
    RosenbrockRotated,
    // high conditioning, unimodal
    Ellipsoidal,
    Discus,
    BentCigar,
    SharpRidge,
    DifferentPowers,
    // multimodal, adequate global structure
    Rastrigin,
    Weierstrass,
    SchaffersF7,
    SchaffersF7Ill,
    GriewankRosenbrock,
    // multimodal, weak global structure
    Schwefel,
    Katsuura,
    Lunacek,
    // held out
    Gallagher101,
    Gallagher21,
    Ackley,
    DixonPrice,
    Salomon,
    Levy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionSet {
    Training,
    Ood,
}

const TRAINING: [FunctionId; 22] = [
    FunctionId::Sphere,
    FunctionId::EllipsoidalSeparable,
    FunctionId::RastriginSeparable,
    FunctionId::BucheRastrigin,
    FunctionId::LinearSlope,
    FunctionId::AttractiveSector,
    FunctionId::StepEllipsoidal,
    FunctionId::Rosenbrock,
    FunctionId::RosenbrockRotated,
    FunctionId::Ellipsoidal,
    FunctionId::Discus,
    FunctionId::BentCigar,
    FunctionId::SharpRidge,
    FunctionId::DifferentPowers,
    FunctionId::Rastrigin,
    FunctionId::Weierstrass,
    FunctionId::SchaffersF7,
    FunctionId::SchaffersF7Ill,
    FunctionId::GriewankRosenbrock,
    FunctionId::Schwefel,
    FunctionId::Katsuura,
    FunctionId::Lunacek,
];

const OOD: [FunctionId; 6] = [
    FunctionId::Gallagher101,
    FunctionId::Gallagher21,
    FunctionId::Ackley,
    FunctionId::DixonPrice,
    FunctionId::Salomon,
    FunctionId::Levy,
];

pub fn list_functions(set: FunctionSet) -> &'static [FunctionId] {
    match set {
        FunctionSet::Training => &TRAINING,
        FunctionSet::Ood => &OOD,
    }
}

impl FunctionId {
    pub fn name(self) -> &'static str {
        use FunctionId::*;
        match self {
            Sphere => "sphere",
            EllipsoidalSeparable => "ellipsoidal_separable",
            RastriginSeparable => "rastrigin_separable",
            BucheRastrigin => "buche_rastrigin",
            LinearSlope => "linear_slope",
            AttractiveSector => "attractive_sector",
            StepEllipsoidal => "step_ellipsoidal",
            Rosenbrock => "rosenbrock",
            RosenbrockRotated => "rosenbrock_rotated",
            Ellipsoidal => "ellipsoidal",
            Discus => "discus",
            BentCigar => "bent_cigar",
            SharpRidge => "sharp_ridge",
            DifferentPowers => "different_powers",
            Rastrigin => "rastrigin",
            Weierstrass => "weierstrass",
            SchaffersF7 => "schaffers_f7",
            SchaffersF7Ill => "schaffers_f7_ill",
            GriewankRosenbrock => "griewank_rosenbrock",
            Schwefel => "schwefel",
            Katsuura => "katsuura",
            Lunacek => "lunacek",
            Gallagher101 => "gallagher101",
            Gallagher21 => "gallagher21",
            Ackley => "ackley",
            DixonPrice => "dixon_price",
            Salomon => "salomon",
            Levy => "levy",
        }
    }

    pub fn is_training(self) -> bool {
        TRAINING.contains(&self)
    }

    /// Smallest dimension for which the function is defined here.
    pub fn min_dim(self) -> usize {
        use FunctionId::*;
        match self {
            Rosenbrock | RosenbrockRotated | SchaffersF7 | SchaffersF7Ill | GriewankRosenbrock
            | DixonPrice => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for FunctionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FunctionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TRAINING
            .iter()
            .chain(OOD.iter())
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown function `{s}`")))
    }
}

/// Peaks of a Gallagher function: centres, per-peak diagonal conditioning
/// (already divided by alpha^(1/4)) and weights. Peak 0 is the global optimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GallagherPeaks {
    pub centers: Matrix,
    pub conditioning: Matrix,
    pub weights: Vec<f64>,
}

/// A fully materialized benchmark task.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveInstance {
    pub function: FunctionId,
    pub dim: usize,
    /// Primary rotation R.
    pub rotation: Matrix,
    /// Secondary rotation Q used by the functions that compose two rotations.
    pub rotation_q: Matrix,
    pub x_opt: Vec<f64>,
    /// Raw (minimization-form) value at `x_opt`.
    pub f_opt: f64,
    pub noise: NoiseSpec,
    pub low: Vec<f64>,
    pub high: Vec<f64>,
    pub seed: u64,
    pub peaks: Option<GallagherPeaks>,
}

/// Sample a concrete instance of `function` in dimension `n`.
pub fn build_instance(
    function: FunctionId,
    n: usize,
    noise: NoiseSpec,
    seed: u64,
) -> Result<ObjectiveInstance> {
    if n < function.min_dim() {
        return Err(Error::Dimension(format!(
            "{function} requires n >= {}, got {n}",
            function.min_dim()
        )));
    }
    noise.validate()?;
    let mut rng = rng::stream_at(seed, &[rng::tag::INSTANCE]);
    let rotation = transforms::random_rotation(n, &mut rng);
    let rotation_q = transforms::random_rotation(n, &mut rng);

    let inner = 0.8 * BOX_HIGH;
    let mut x_opt: Vec<f64> = (0..n).map(|_| rng.gen_range(-inner..inner)).collect();
    let signs: Vec<f64> = (0..n)
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let mut peaks = None;

    use FunctionId::*;
    match function {
        BucheRastrigin => {
            for v in x_opt.iter_mut().step_by(2) {
                *v = v.abs();
            }
        }
        LinearSlope => x_opt = signs.iter().map(|s| s * BOX_HIGH).collect(),
        Schwefel => x_opt = signs.iter().map(|s| s * 4.209_687_463_3 / 2.0).collect(),
        Lunacek => x_opt = signs.iter().map(|s| s * 2.5 / 2.0).collect(),
        Gallagher101 => {
            let g = gallagher_peaks(n, 101, 1000.0, 4.0, 5.0, &mut rng);
            x_opt = g.centers.row(0).to_vec();
            peaks = Some(g);
        }
        Gallagher21 => {
            let g = gallagher_peaks(n, 21, 1000.0 * 1000.0, 3.92, 4.9, &mut rng);
            x_opt = g.centers.row(0).to_vec();
            peaks = Some(g);
        }
        _ => {}
    }

    let mut inst = ObjectiveInstance {
        function,
        dim: n,
        rotation,
        rotation_q,
        x_opt,
        f_opt: 0.0,
        noise,
        low: vec![BOX_LOW; n],
        high: vec![BOX_HIGH; n],
        seed,
        peaks,
    };
    inst.f_opt = inst.raw(&inst.x_opt);
    Ok(inst)
}

fn gallagher_peaks(
    n: usize,
    count: usize,
    alpha_best: f64,
    best_range: f64,
    other_range: f64,
    rng: &mut Stream,
) -> GallagherPeaks {
    let mut centers = Matrix::zeros(count, n);
    for i in 0..count {
        let r = if i == 0 { best_range } else { other_range };
        for v in centers.row_mut(i) {
            *v = rng.gen_range(-r..r);
        }
    }
    let m = count - 1;
    let mut alphas: Vec<f64> = (0..m)
        .map(|j| 1000f64.powf(2.0 * j as f64 / (m - 1) as f64))
        .collect();
    alphas.shuffle(rng);
    alphas.insert(0, alpha_best);

    let mut conditioning = Matrix::zeros(count, n);
    for (i, &a) in alphas.iter().enumerate() {
        let mut diag: Vec<f64> = (0..n)
            .map(|j| a.powf(transforms::ratio(j, n)) / a.powf(0.25))
            .collect();
        diag.shuffle(rng);
        conditioning.row_mut(i).copy_from_slice(&diag);
    }
    let weights = (0..count)
        .map(|i| {
            if i == 0 {
                10.0
            } else {
                1.1 + 8.0 * (i - 1) as f64 / (m - 1) as f64
            }
        })
        .collect();
    GallagherPeaks {
        centers,
        conditioning,
        weights,
    }
}

impl ObjectiveInstance {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Raw minimization-form value, without noise.
    pub fn raw(&self, x: &[f64]) -> f64 {
        if self.function.is_training() {
            bbob::raw(self, x)
        } else {
            ood::raw(self, x)
        }
    }

    /// Noise-free fitness in maximization form.
    pub fn fitness_noiseless(&self, x: &[f64]) -> f64 {
        0.0 - (self.raw(x) - self.f_opt)
    }

    /// R (x - x_opt)
    pub(crate) fn rotate_shifted(&self, x: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = x.iter().zip(&self.x_opt).map(|(a, b)| a - b).collect();
        self.rotation.mul_vec(&d)
    }
}

/// Fitness of `x` in maximization form; noise, if configured, draws from `rng`.
pub fn evaluate(instance: &ObjectiveInstance, x: &[f64], rng: &mut Stream) -> Result<f64> {
    if x.len() != instance.dim {
        return Err(Error::Input(format!(
            "expected a vector of length {}, got {}",
            instance.dim,
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("non-finite coordinate in x".into()));
    }
    let value = instance.raw(x) - instance.f_opt;
    Ok(0.0 - apply_noise(value, &instance.noise, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn noiseless() -> NoiseSpec {
        NoiseSpec::default()
    }

    #[test]
    fn set_sizes_and_disjointness() {
        assert_eq!(list_functions(FunctionSet::Training).len(), 22);
        assert_eq!(list_functions(FunctionSet::Ood).len(), 6);
        for f in list_functions(FunctionSet::Ood) {
            assert!(!list_functions(FunctionSet::Training).contains(f));
        }
        assert!(list_functions(FunctionSet::Ood).contains(&FunctionId::Gallagher101));
        assert!(list_functions(FunctionSet::Ood).contains(&FunctionId::Gallagher21));
    }

    #[test]
    fn names_round_trip() {
        for f in TRAINING.iter().chain(OOD.iter()) {
            assert_eq!(f.name().parse::<FunctionId>().unwrap(), *f);
        }
        assert!("nope".parse::<FunctionId>().is_err());
    }

    #[test]
    fn rotation_orthogonal_and_deterministic() {
        let a = build_instance(FunctionId::Sphere, 2, noiseless(), 42).unwrap();
        let rtr = a.rotation.transpose().matmul(&a.rotation);
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((rtr[(i, j)] - e).abs() < 1e-9);
            }
        }
        let b = build_instance(FunctionId::Sphere, 3, noiseless(), 42).unwrap();
        let c = build_instance(FunctionId::Sphere, 3, noiseless(), 42).unwrap();
        assert_eq!(b, c);
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            build_instance(FunctionId::DixonPrice, 1, noiseless(), 0),
            Err(Error::Dimension(_))
        ));
        assert!(build_instance(FunctionId::Rosenbrock, 1, noiseless(), 0).is_err());
        assert!(build_instance(FunctionId::Sphere, 1, noiseless(), 0).is_ok());
    }

    #[test]
    fn sphere_optimum_and_unit_offset() {
        let inst = build_instance(FunctionId::Sphere, 4, noiseless(), 9).unwrap();
        let mut rng = stream(0);
        assert_eq!(evaluate(&inst, &inst.x_opt, &mut rng).unwrap(), 0.0);
        let x: Vec<f64> = (0..4)
            .map(|i| inst.x_opt[i] + inst.rotation[(0, i)])
            .collect();
        assert!((evaluate(&inst, &x, &mut rng).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn every_function_is_zero_at_its_optimum_and_finite_in_box() {
        let mut rng = stream(5);
        for f in TRAINING.iter().chain(OOD.iter()).copied() {
            for n in [2, 3, 7, 12] {
                let inst = build_instance(f, n, noiseless(), 11 + n as u64).unwrap();
                assert!(inst.x_opt.iter().all(|v| (BOX_LOW..=BOX_HIGH).contains(v)));
                assert_eq!(inst.fitness_noiseless(&inst.x_opt), 0.0, "{f} n={n}");
                for _ in 0..50 {
                    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(BOX_LOW..BOX_HIGH)).collect();
                    let v = evaluate(&inst, &x, &mut rng).unwrap();
                    assert!(v.is_finite(), "{f} n={n}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let inst = build_instance(FunctionId::Sphere, 2, noiseless(), 1).unwrap();
        let mut rng = stream(0);
        assert!(evaluate(&inst, &[0.0, f64::NAN], &mut rng).is_err());
        assert!(evaluate(&inst, &[0.0, f64::INFINITY], &mut rng).is_err());
        assert!(evaluate(&inst, &[0.0], &mut rng).is_err());
    }

    #[test]
    fn one_dimensional_instances_work() {
        let mut rng = stream(2);
        for f in TRAINING.iter().chain(OOD.iter()).copied() {
            if f.min_dim() > 1 {
                continue;
            }
            let inst = build_instance(f, 1, noiseless(), 3).unwrap();
            assert_eq!(inst.fitness_noiseless(&inst.x_opt), 0.0);
            assert!(evaluate(&inst, &[1.5], &mut rng).unwrap().is_finite());
        }
    }
}
