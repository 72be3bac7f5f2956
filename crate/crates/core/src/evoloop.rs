//! The generational loop shared by the GA, the QD baselines and the learned
//! variant: reproduce, concatenate, evaluate, compete, keep the top N.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::competition::{compete, CompetitionFn};
use crate::descriptor::DescriptorSpec;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::{compute_metrics, GenerationMetrics};
use crate::rng::{self, tag, Stream};
use crate::task::Task;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoopConfig {
    pub pop_size: usize,
    pub batch_size: usize,
    pub generations: usize,
    /// Mutation standard deviation as a fraction of the box width.
    pub mutation_sigma: f64,
    pub seed: u64,
}

impl Default for LoopConfig {
    fn default() -> Self {
        Self {
            pop_size: 128,
            batch_size: 32,
            generations: 256,
            mutation_sigma: 0.05,
            seed: 0,
        }
    }
}

impl LoopConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size == 0 {
            return Err(Error::config("loop.pop_size", "must be >= 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("loop.batch_size", "must be >= 1"));
        }
        if self.generations == 0 {
            return Err(Error::config("loop.generations", "must be >= 1"));
        }
        if !(self.mutation_sigma >= 0.0 && self.mutation_sigma.is_finite()) {
            return Err(Error::config("loop.mutation_sigma", "must be finite and >= 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub x: Matrix,
    pub f: Vec<f64>,
    pub d: Matrix,
    pub valid: Vec<bool>,
    pub generation: usize,
}

impl Population {
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    fn check(&self) -> Result<()> {
        let n = self.f.len();
        if self.x.rows() != n || self.d.rows() != n || self.valid.len() != n {
            return Err(Error::State("population arrays disagree in length".into()));
        }
        Ok(())
    }
}

/// Evaluate genotypes row by row; row `i` uses its own stream derived from
/// `(seed, generation, i)`, so the result does not depend on evaluation order.
fn evaluate_rows(
    x: &Matrix,
    task: &Task,
    spec: &DescriptorSpec,
    seed: u64,
    generation: usize,
) -> Result<(Vec<f64>, Matrix)> {
    let mut f = Vec::with_capacity(x.rows());
    let mut d = Matrix::zeros(0, spec.dim());
    for (i, row) in x.iter_rows().enumerate() {
        let mut r = rng::stream_at(seed, &[tag::EVALUATE, generation as u64, i as u64]);
        let (fit, native) = task.evaluate(row, &mut r)?;
        let desc = spec.descriptor(row, native.as_deref(), &mut r)?;
        f.push(fit);
        d.push_row(&desc);
    }
    Ok((f, d))
}

pub fn init_population(cfg: &LoopConfig, task: &Task, spec: &DescriptorSpec) -> Result<Population> {
    cfg.validate()?;
    let n = task.dim();
    let (low, high) = (task.low(), task.high());
    let mut r = rng::stream_at(cfg.seed, &[tag::INIT]);
    let mut x = Matrix::zeros(cfg.pop_size, n);
    for i in 0..cfg.pop_size {
        for (j, v) in x.row_mut(i).iter_mut().enumerate() {
            *v = r.gen_range(low[j]..=high[j]);
        }
    }
    let (f, d) = evaluate_rows(&x, task, spec, cfg.seed, 0)?;
    Ok(Population {
        valid: vec![true; cfg.pop_size],
        x,
        f,
        d,
        generation: 0,
    })
}

/// Uniform parent choice among valid rows plus clipped isotropic Gaussian
/// mutation with per-coordinate std `sigma * (high - low)`.
pub fn reproduce(
    pop: &Population,
    batch: usize,
    sigma: f64,
    low: &[f64],
    high: &[f64],
    rng: &mut Stream,
) -> Result<Matrix> {
    let parents: Vec<usize> = (0..pop.len()).filter(|&i| pop.valid[i]).collect();
    if parents.is_empty() {
        return Err(Error::State("no valid individual to reproduce from".into()));
    }
    let n = pop.x.cols();
    let mut out = Matrix::zeros(batch, n);
    for b in 0..batch {
        let p = parents[rng.gen_range(0..parents.len())];
        let src = pop.x.row(p);
        for (j, dst) in out.row_mut(b).iter_mut().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            let v = src[j] + sigma * (high[j] - low[j]) * z;
            *dst = v.clamp(low[j], high[j]);
        }
    }
    Ok(out)
}

/// Indices of the `keep` highest scores, ties resolved toward the lower index.
pub fn truncate(scores: &[f64], keep: usize) -> Vec<usize> {
    let key = |v: f64| if v.is_nan() { f64::NEG_INFINITY } else { v };
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| {
        key(scores[b])
            .partial_cmp(&key(scores[a]))
            .expect("NaN mapped away")
    });
    idx.truncate(keep);
    idx
}

pub fn step_generation(
    pop: &Population,
    cfg: &LoopConfig,
    task: &Task,
    spec: &DescriptorSpec,
    competition: &CompetitionFn,
) -> Result<Population> {
    pop.check()?;
    let g = pop.generation as u64 + 1;
    let (low, high) = (task.low(), task.high());
    let mut r = rng::stream_at(cfg.seed, &[tag::GENERATION, g, tag::REPRODUCE]);
    let offspring = reproduce(pop, cfg.batch_size, cfg.mutation_sigma, &low, &high, &mut r)?;
    let (f_off, d_off) = evaluate_rows(&offspring, task, spec, cfg.seed, g as usize)?;

    let x = pop.x.vstack(&offspring);
    let d = pop.d.vstack(&d_off);
    let mut f = pop.f.clone();
    f.extend_from_slice(&f_off);
    let mut valid = pop.valid.clone();
    valid.extend(std::iter::repeat_n(true, cfg.batch_size));

    let mut cr = rng::stream_at(cfg.seed, &[tag::GENERATION, g, tag::COMPETE]);
    let scores = compete(competition, &f, &d, &valid, &mut cr)?;
    let keep = truncate(&scores, cfg.pop_size);

    Ok(Population {
        x: x.select_rows(&keep),
        f: keep.iter().map(|&i| f[i]).collect(),
        d: d.select_rows(&keep),
        valid: keep
            .iter()
            .map(|&i| valid[i] && scores[i] != f64::NEG_INFINITY)
            .collect(),
        generation: pop.generation + 1,
    })
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub snapshots: Vec<GenerationMetrics>,
    pub final_population: Population,
}

/// Run `cfg.generations` generations, recording metrics after each.
pub fn run(
    cfg: &LoopConfig,
    task: &Task,
    spec: &DescriptorSpec,
    competition: &CompetitionFn,
    metrics_k: usize,
) -> Result<Trajectory> {
    cfg.validate()?;
    if task.dim() == 0 {
        return Err(Error::Dimension("task has zero dimensions".into()));
    }
    competition.validate(spec.dim())?;
    let mut pop = init_population(cfg, task, spec)?;
    let mut snapshots = Vec::with_capacity(cfg.generations);
    for _ in 0..cfg.generations {
        pop = step_generation(&pop, cfg, task, spec, competition)?;
        snapshots.push(compute_metrics(&pop, metrics_k));
    }
    Ok(Trajectory {
        snapshots,
        final_population: pop,
    })
}
