//! Meta-training of the learned competition: sample tasks, roll out every
//! candidate parameter vector on the same tasks, normalize, update Sep-CMA-ES.

pub mod objective;
pub mod sepcma;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::benchfn::{build_instance, list_functions, FunctionSet, NoiseKind, NoiseSpec, ObjectiveInstance};
use crate::competition::CompetitionFn;
use crate::descriptor::{sample_projection, DescriptorSpec, ProjectionDescriptor};
use crate::error::{Error, Result};
use crate::evoloop::{run, LoopConfig, Trajectory};
use crate::lqdnet::{init_params, LqdModel, LqdParams, NetConfig, LAYOUT_VERSION};
use crate::matrix::Matrix;
use crate::rng::{self, tag, Stream};
use crate::task::Task;

pub use objective::{
    generation_value, meta_objective_value, normalize_aggregate, MetaObjective, Normalization,
    ObjectiveKind, Temporal,
};
pub use sepcma::{cma_ask, cma_init, cma_tell, SepCmaState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSampling {
    /// Drawn uniformly per task.
    pub kinds: Vec<NoiseKind>,
    /// Strength range `[low, high]`, drawn uniformly for noisy kinds.
    pub strength: [f64; 2],
    pub cauchy_cap: f64,
}

impl Default for NoiseSampling {
    fn default() -> Self {
        Self {
            kinds: vec![NoiseKind::None, NoiseKind::Uniform, NoiseKind::Gaussian, NoiseKind::Cauchy],
            strength: [0.0, 0.05],
            cauchy_cap: NoiseSpec::default().cauchy_cap,
        }
    }
}

/// Inner-loop sizes; each task supplies its own seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InnerLoop {
    pub pop_size: usize,
    pub batch_size: usize,
    pub generations: usize,
    pub mutation_sigma: f64,
}

impl Default for InnerLoop {
    fn default() -> Self {
        Self {
            pop_size: 32,
            batch_size: 8,
            generations: 64,
            mutation_sigma: 0.05,
        }
    }
}

impl InnerLoop {
    pub fn loop_config(&self, seed: u64) -> LoopConfig {
        LoopConfig {
            pop_size: self.pop_size,
            batch_size: self.batch_size,
            generations: self.generations,
            mutation_sigma: self.mutation_sigma,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetaConfig {
    pub objective: MetaObjective,
    pub generations: usize,
    pub population: usize,
    pub tasks_per_generation: usize,
    pub sigma0: f64,
    /// Inclusive task dimension range.
    pub dims: [usize; 2],
    pub noise: NoiseSampling,
    pub descriptor_dim: usize,
    pub inner: InnerLoop,
    pub net: NetConfig,
    pub normalization: Normalization,
    pub validation_tasks: usize,
    pub validate_every: usize,
    /// Set from the experiment's master seed, never read from a file.
    #[serde(skip)]
    pub seed: u64,
}

impl Default for MetaConfig {
    fn default() -> Self {
        Self {
            objective: MetaObjective::new(ObjectiveKind::Fitness),
            generations: 200,
            population: 16,
            tasks_per_generation: 8,
            sigma0: 0.1,
            dims: [2, 12],
            noise: NoiseSampling::default(),
            descriptor_dim: 2,
            inner: InnerLoop::default(),
            net: NetConfig::default(),
            normalization: Normalization::ZScore,
            validation_tasks: 32,
            validate_every: 10,
            seed: 0,
        }
    }
}

impl MetaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 {
            return Err(Error::config("meta.generations", "must be >= 1"));
        }
        if self.population < 2 {
            return Err(Error::config("meta.population", "must be >= 2"));
        }
        if self.tasks_per_generation == 0 {
            return Err(Error::config("meta.tasks_per_generation", "must be >= 1"));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(Error::config("meta.sigma0", "must be finite and > 0"));
        }
        if self.dims[0] == 0 || self.dims[0] > self.dims[1] {
            return Err(Error::config("meta.dims", "need 1 <= low <= high"));
        }
        if self.noise.kinds.is_empty() {
            return Err(Error::config("meta.noise.kinds", "must list at least one kind"));
        }
        let [lo, hi] = self.noise.strength;
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::config("meta.noise.strength", "need 0 <= low <= high"));
        }
        if self.descriptor_dim == 0 {
            return Err(Error::config("meta.descriptor_dim", "must be >= 1"));
        }
        if self.objective.k == 0 {
            return Err(Error::config("meta.objective.k", "must be >= 1"));
        }
        if self.validation_tasks == 0 {
            return Err(Error::config("meta.validation_tasks", "must be >= 1"));
        }
        if self.validate_every == 0 {
            return Err(Error::config("meta.validate_every", "must be >= 1"));
        }
        self.net.validate()?;
        self.inner.loop_config(0).validate()
    }

    /// SHA-256 of the canonical JSON encoding plus the seed.
    pub fn hash(&self) -> String {
        hash_json(&(self, self.seed))
    }
}

pub(crate) fn hash_json<T: Serialize>(v: &T) -> String {
    let text = serde_json::to_string(v).expect("config serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// One inner-loop problem: objective, descriptor map and loop settings.
#[derive(Clone, Debug)]
pub struct MetaTaskSpec {
    pub instance: Arc<ObjectiveInstance>,
    pub descriptor: ProjectionDescriptor,
    pub loop_cfg: LoopConfig,
}

impl MetaTaskSpec {
    pub fn task(&self) -> Task {
        Task::Bbob(self.instance.clone())
    }

    pub fn descriptor_spec(&self) -> DescriptorSpec {
        DescriptorSpec::Projection(self.descriptor.clone())
    }
}

pub fn sample_meta_task(cfg: &MetaConfig, rng: &mut Stream) -> Result<MetaTaskSpec> {
    let training = list_functions(FunctionSet::Training);
    let function = training[rng.gen_range(0..training.len())];
    let n = rng.gen_range(cfg.dims[0]..=cfg.dims[1]).max(function.min_dim());
    let kind = cfg.noise.kinds[rng.gen_range(0..cfg.noise.kinds.len())];
    let [lo, hi] = cfg.noise.strength;
    let strength = match kind {
        NoiseKind::None => 0.0,
        _ if lo == hi => lo,
        _ => rng.gen_range(lo..hi),
    };
    let noise = NoiseSpec {
        kind,
        strength,
        cauchy_cap: cfg.noise.cauchy_cap,
    };
    let instance = build_instance(function, n, noise, rng.gen())?;
    let descriptor = sample_projection(n, cfg.descriptor_dim, rng.gen())?;
    Ok(MetaTaskSpec {
        instance: Arc::new(instance),
        descriptor,
        loop_cfg: cfg.inner.loop_config(rng.gen()),
    })
}

/// `count` tasks drawn in sequence from the stream at `path` under the
/// configured seed.
pub fn sample_task_batch(cfg: &MetaConfig, path: &[u64], count: usize) -> Result<Vec<MetaTaskSpec>> {
    let mut r = rng::stream_at(cfg.seed, path);
    (0..count).map(|_| sample_meta_task(cfg, &mut r)).collect()
}

/// Run the inner loop on `task` with any competition.
pub fn rollout(competition: &CompetitionFn, task: &MetaTaskSpec, k: usize) -> Result<Trajectory> {
    run(&task.loop_cfg, &task.task(), &task.descriptor_spec(), competition, k)
}

/// Objective value of every (competition, task) pair, rows in `competitions`
/// order. Pairs run in parallel; the result does not depend on scheduling.
pub fn score_grid(
    competitions: &[CompetitionFn],
    tasks: &[MetaTaskSpec],
    objective: &MetaObjective,
) -> Result<Matrix> {
    let (m, k) = (competitions.len(), tasks.len());
    let cells: Vec<f64> = (0..m * k)
        .into_par_iter()
        .map(|c| {
            let t = rollout(&competitions[c / k], &tasks[c % k], objective.k)?;
            Ok(meta_objective_value(&t, objective))
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_vec(m, k, cells))
}

fn learned(params: LqdParams) -> Result<CompetitionFn> {
    Ok(CompetitionFn::Learned(Arc::new(LqdModel::new(params)?)))
}

/// Objective values of `params` on each task.
pub fn validation_scores(params: &LqdParams, tasks: &[MetaTaskSpec], objective: &MetaObjective) -> Result<Vec<f64>> {
    let grid = score_grid(&[learned(params.clone())?], tasks, objective)?;
    Ok(grid.row(0).to_vec())
}

/// Replace non-finite entries by their column's finite minimum (0 if none).
fn floor_sentinels(scores: &Matrix) -> Matrix {
    let mut out = scores.clone();
    for j in 0..scores.cols() {
        let floor = (0..scores.rows())
            .map(|i| scores[(i, j)])
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, f64::min);
        let floor = if floor.is_finite() { floor } else { 0.0 };
        for i in 0..scores.rows() {
            if !out[(i, j)].is_finite() {
                out[(i, j)] = floor;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub meta_gen: u64,
    /// Mean raw objective over all candidates and tasks.
    pub mean_meta_fitness: f64,
    /// Best candidate's mean raw objective over tasks.
    pub best_meta_fitness: f64,
    /// Step size after the update.
    pub sigma: f64,
}

pub const LOG_HEADER: &str = "meta_gen,mean_meta_fitness,best_meta_fitness,sigma";

impl LogRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.meta_gen, self.mean_meta_fitness, self.best_meta_fitness, self.sigma
        )
    }
}

/// Search mean after `meta_gen` updates and its per-task validation scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub meta_gen: u64,
    pub theta: Vec<f64>,
    pub scores: Vec<f64>,
}

pub const CHECKPOINT_FORMAT: &str = "lqd-meta-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Everything needed to continue a run exactly. Floats are stored as
/// shortest round-trip decimal text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaCheckpoint {
    pub format: String,
    pub version: u32,
    pub layout_version: u32,
    pub objective: ObjectiveKind,
    pub config_hash: String,
    pub master_seed: u64,
    pub meta_gen: u64,
    pub state: SepCmaState,
    pub validation: Vec<ValidationRecord>,
    pub log: Vec<LogRow>,
}

impl MetaCheckpoint {
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        write_atomic(path, text.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let ck: Self = serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        if ck.format != CHECKPOINT_FORMAT || ck.version != CHECKPOINT_VERSION {
            return Err(Error::Format {
                path: path.to_path_buf(),
                msg: format!("unsupported checkpoint {} v{}", ck.format, ck.version),
            });
        }
        Ok(ck)
    }
}

/// Write to a sibling temp file, then rename over `path`.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub struct MetaTrainer {
    cfg: MetaConfig,
    config_hash: String,
    state: SepCmaState,
    meta_gen: u64,
    validation_tasks: Vec<MetaTaskSpec>,
    validation: Vec<ValidationRecord>,
    log: Vec<LogRow>,
}

#[derive(Clone, Debug)]
pub struct MetaOutcome {
    /// Validated parameters with the highest normalized validation score.
    pub best: LqdParams,
    pub best_meta_gen: u64,
    pub initial: LqdParams,
    pub log: Vec<LogRow>,
    pub validation: Vec<ValidationRecord>,
    pub state: SepCmaState,
}

impl MetaTrainer {
    pub fn new(cfg: MetaConfig) -> Result<Self> {
        cfg.validate()?;
        let init = initial_params(&cfg)?;
        let state = cma_init(init.theta, cfg.population, cfg.sigma0)?;
        let mut t = Self::assemble(cfg, state, 0, Vec::new(), Vec::new())?;
        t.validate_mean()?;
        Ok(t)
    }

    pub fn from_checkpoint(cfg: MetaConfig, ck: MetaCheckpoint) -> Result<Self> {
        cfg.validate()?;
        if ck.config_hash != cfg.hash() {
            return Err(Error::config(
                "meta",
                "checkpoint was written by a different configuration",
            ));
        }
        if ck.master_seed != cfg.seed || ck.layout_version != LAYOUT_VERSION {
            return Err(Error::config("meta.seed", "checkpoint seed or layout mismatch"));
        }
        if ck.state.lambda != cfg.population
            || ck.state.dim() != cfg.net.param_count(cfg.descriptor_dim)
        {
            return Err(Error::State("checkpoint state does not fit the configuration".into()));
        }
        Self::assemble(cfg, ck.state, ck.meta_gen, ck.validation, ck.log)
    }

    fn assemble(
        cfg: MetaConfig,
        state: SepCmaState,
        meta_gen: u64,
        validation: Vec<ValidationRecord>,
        log: Vec<LogRow>,
    ) -> Result<Self> {
        let validation_tasks = sample_task_batch(&cfg, &[tag::VALIDATION], cfg.validation_tasks)?;
        Ok(Self {
            config_hash: cfg.hash(),
            cfg,
            state,
            meta_gen,
            validation_tasks,
            validation,
            log,
        })
    }

    pub fn config(&self) -> &MetaConfig {
        &self.cfg
    }

    pub fn meta_gen(&self) -> u64 {
        self.meta_gen
    }

    pub fn state(&self) -> &SepCmaState {
        &self.state
    }

    pub fn log(&self) -> &[LogRow] {
        &self.log
    }

    pub fn is_done(&self) -> bool {
        self.meta_gen >= self.cfg.generations as u64
    }

    fn params(&self, theta: Vec<f64>) -> Result<LqdParams> {
        LqdParams::new(self.cfg.net, self.cfg.descriptor_dim, theta)
    }

    fn validate_mean(&mut self) -> Result<()> {
        let p = self.params(self.state.mean.clone())?;
        let scores = validation_scores(&p, &self.validation_tasks, &self.cfg.objective)?;
        self.validation.push(ValidationRecord {
            meta_gen: self.meta_gen,
            theta: p.theta,
            scores,
        });
        Ok(())
    }

    /// One meta-generation (plus validation when due).
    pub fn step(&mut self) -> Result<&LogRow> {
        if self.is_done() {
            return Err(Error::State("meta-training already finished".into()));
        }
        let g = self.meta_gen;
        let tasks = sample_task_batch(
            &self.cfg,
            &[tag::META_GEN, g, tag::META_TASK],
            self.cfg.tasks_per_generation,
        )?;
        let mut ask = rng::stream_at(self.cfg.seed, &[tag::META_GEN, g, tag::META_ASK]);
        let candidates = cma_ask(&self.state, &mut ask)?;
        let comps = candidates
            .iter()
            .map(|c| learned(self.params(c.clone())?))
            .collect::<Result<Vec<_>>>()?;
        let raw = score_grid(&comps, &tasks, &self.cfg.objective)?;
        let fitness = normalize_aggregate(&raw, self.cfg.normalization);

        let floored = floor_sentinels(&raw);
        let per_candidate: Vec<f64> = floored
            .iter_rows()
            .map(|r| r.iter().sum::<f64>() / r.len() as f64)
            .collect();
        let mean = per_candidate.iter().sum::<f64>() / per_candidate.len() as f64;
        let best = per_candidate.iter().copied().fold(f64::NEG_INFINITY, f64::max);

        self.state = cma_tell(&self.state, &candidates, &fitness)?;
        self.meta_gen += 1;
        self.log.push(LogRow {
            meta_gen: g,
            mean_meta_fitness: mean,
            best_meta_fitness: best,
            sigma: self.state.sigma,
        });
        if self.meta_gen.is_multiple_of(self.cfg.validate_every as u64) || self.is_done() {
            self.validate_mean()?;
        }
        Ok(self.log.last().expect("just pushed"))
    }

    pub fn checkpoint(&self) -> MetaCheckpoint {
        MetaCheckpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            layout_version: LAYOUT_VERSION,
            objective: self.cfg.objective.kind,
            config_hash: self.config_hash.clone(),
            master_seed: self.cfg.seed,
            meta_gen: self.meta_gen,
            state: self.state.clone(),
            validation: self.validation.clone(),
            log: self.log.clone(),
        }
    }

    /// Pick the validated mean with the best normalized validation score
    /// (earliest on ties).
    pub fn finish(self) -> Result<MetaOutcome> {
        let rows: Vec<Vec<f64>> = self.validation.iter().map(|v| v.scores.clone()).collect();
        let agg = normalize_aggregate(&Matrix::from_rows(&rows), self.cfg.normalization);
        let mut best = 0;
        for (i, &v) in agg.iter().enumerate() {
            if v > agg[best] {
                best = i;
            }
        }
        let rec = &self.validation[best];
        Ok(MetaOutcome {
            best: self.params(rec.theta.clone())?,
            best_meta_gen: rec.meta_gen,
            initial: initial_params(&self.cfg)?,
            log: self.log,
            validation: self.validation,
            state: self.state,
        })
    }
}

/// Starting parameters for a configuration.
pub fn initial_params(cfg: &MetaConfig) -> Result<LqdParams> {
    init_params(cfg.net, cfg.descriptor_dim, rng::derive(cfg.seed, tag::NET_INIT))
}

#[derive(Clone, Debug, Default)]
pub struct TrainOptions {
    pub checkpoint: Option<PathBuf>,
    /// Meta-generations between checkpoint writes (0 = only at the end).
    pub checkpoint_every: usize,
    /// Continue from `checkpoint` if it exists.
    pub resume: bool,
}

pub fn meta_train(cfg: &MetaConfig, opts: &TrainOptions) -> Result<MetaOutcome> {
    let mut trainer = match &opts.checkpoint {
        Some(p) if opts.resume && p.exists() => {
            MetaTrainer::from_checkpoint(cfg.clone(), MetaCheckpoint::load(p)?)?
        }
        _ => MetaTrainer::new(cfg.clone())?,
    };
    while !trainer.is_done() {
        trainer.step()?;
        if let Some(p) = &opts.checkpoint {
            let due = opts.checkpoint_every > 0
                && trainer.meta_gen() % opts.checkpoint_every as u64 == 0;
            if due || trainer.is_done() {
                trainer.checkpoint().save(p)?;
            }
        }
    }
    trainer.finish()
}
