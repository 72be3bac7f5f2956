//! Config-driven experiments: replicated runs, meta-training, significance
//! tables, competition landscapes and the random-descriptor ablation.
//!
//! Every CSV starts with a `# key=value,...` line carrying the config hash;
//! given the same config and master seed the CSVs are byte-identical
//! whatever the worker count.

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    AlgorithmConfig, AlgorithmKind, CheckpointSection, DescriptorChoice, DescriptorConfig,
    ExperimentConfig, LandscapeSection, LoopSection, TaskConfig,
};

use crate::armtask::ArmSpec;
use crate::benchfn::{build_instance, list_functions, FunctionSet};
use crate::competition::{build_centroids, compete, Bounds, CompetitionFn};
use crate::descriptor::{sample_projection, DescriptorSpec};
use crate::error::{Error, Result};
use crate::evoloop::{run, Population};
use crate::lqdnet::{LqdModel, LqdParams, LAYOUT_VERSION};
use crate::metaopt::{
    meta_train, write_atomic, MetaOutcome, ObjectiveKind, TrainOptions, LOG_HEADER,
};
use crate::metrics::GenerationMetrics;
use crate::rng::{self, tag};
use crate::stats::{holm, mann_whitney, median, Alternative};
use crate::task::Task;

/// Environment variable that overrides the number of worker threads.
pub const WORKERS_ENV: &str = "LQD_WORKERS";

pub const RUN_HEADER: &str =
    "generation,max_fitness,mean_novelty,mean_dominated_novelty,qd_score,valid_count";

/// Size the global thread pool from `LQD_WORKERS` if it is set. Returns the
/// number of workers in use.
pub fn configure_workers() -> Result<usize> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| Error::config(WORKERS_ENV, format!("expected a positive integer, got `{v}`")))?;
        // a pool that already exists keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}

pub fn replication_seed(master: u64, index: usize) -> u64 {
    rng::derive_path(master, &[tag::REPLICATION, index as u64])
}

pub fn build_task(cfg: &ExperimentConfig) -> Result<Task> {
    match cfg.task()? {
        TaskConfig::Bbob {
            function,
            dim,
            noise,
            instance_seed,
        } => {
            let seed = instance_seed.unwrap_or_else(|| rng::derive(cfg.seed, tag::INSTANCE));
            Ok(Task::Bbob(Arc::new(build_instance(*function, *dim, *noise, seed)?)))
        }
        TaskConfig::Arm { joints } => Ok(Task::Arm(ArmSpec { joints: *joints })),
    }
}

/// The configured descriptor, or the task's natural one: a 2-D projection
/// for benchmark functions, the end-effector position for the arm.
pub fn build_descriptor(cfg: &ExperimentConfig, task: &Task) -> Result<DescriptorSpec> {
    let d = cfg.descriptor.unwrap_or(DescriptorConfig {
        kind: match task {
            Task::Bbob(_) => DescriptorChoice::Projection,
            Task::Arm(_) => DescriptorChoice::TaskSpecific,
        },
        dim: 2,
        seed: None,
    });
    match d.kind {
        DescriptorChoice::Projection => {
            let seed = d.seed.unwrap_or_else(|| rng::derive(cfg.seed, tag::PROJECTION));
            Ok(DescriptorSpec::Projection(sample_projection(task.dim(), d.dim, seed)?))
        }
        DescriptorChoice::TaskSpecific => match task {
            Task::Arm(_) if d.dim == 2 => Ok(DescriptorSpec::TaskSpecific { dim: 2 }),
            Task::Arm(_) => Err(Error::config("descriptor.dim", "the arm descriptor is 2-D")),
            Task::Bbob(_) => Err(Error::config(
                "descriptor.kind",
                "benchmark functions have no task-specific descriptor",
            )),
        },
        DescriptorChoice::RandomNoise => Ok(DescriptorSpec::RandomNoise { dim: d.dim }),
    }
}

/// Parameter file written by `meta-train`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaFile {
    pub format: String,
    pub objective: Option<ObjectiveKind>,
    pub config_hash: String,
    pub meta_gen: u64,
    pub params: LqdParams,
}

pub const THETA_FORMAT: &str = "lqd-theta";

pub fn save_theta(path: &Path, file: &ThetaFile) -> Result<()> {
    let text = serde_json::to_string(file).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    write_atomic(path, text.as_bytes())
}

pub fn load_theta(path: &Path) -> Result<ThetaFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: ThetaFile = serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let bad = |msg: String| Error::Format {
        path: path.to_path_buf(),
        msg,
    };
    if file.format != THETA_FORMAT {
        return Err(bad(format!("not a parameter file (format `{}`)", file.format)));
    }
    if file.params.layout_version != LAYOUT_VERSION {
        return Err(bad(format!(
            "layout version {} (this build reads {LAYOUT_VERSION})",
            file.params.layout_version
        )));
    }
    let p = &file.params;
    LqdParams::new(p.config, p.descriptor_dim, p.theta.clone()).map_err(|e| bad(e.to_string()))?;
    Ok(file)
}

/// `descriptor_bounds` is only consulted by MAP-Elites.
pub fn build_competition(
    alg: &AlgorithmConfig,
    descriptor_bounds: &Bounds,
    pop_size: usize,
    master_seed: u64,
) -> Result<CompetitionFn> {
    Ok(match alg.kind {
        AlgorithmKind::Ga => CompetitionFn::Identity,
        AlgorithmKind::Random => CompetitionFn::Random,
        AlgorithmKind::MapElites => {
            let count = alg.centroids.unwrap_or(pop_size);
            let seed = rng::derive(master_seed, tag::CENTROIDS);
            CompetitionFn::MapElites(Arc::new(build_centroids(count, descriptor_bounds, seed)?))
        }
        AlgorithmKind::NoveltySearch => CompetitionFn::Novelty { k: alg.k },
        AlgorithmKind::DominatedNovelty => CompetitionFn::DominatedNovelty { k: alg.k },
        AlgorithmKind::Lqd => {
            let path = alg
                .theta
                .as_ref()
                .ok_or_else(|| Error::config("algorithm.theta", "lqd needs a parameter file"))?;
            CompetitionFn::Learned(Arc::new(LqdModel::new(load_theta(path)?.params)?))
        }
    })
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub replication: usize,
    pub seed: u64,
    pub config_hash: String,
    pub rows: Vec<GenerationMetrics>,
    pub final_population: Population,
    pub wall_time_s: f64,
}

impl RunRecord {
    pub fn csv(&self) -> String {
        render_run_csv(&self.config_hash, self.seed, &self.rows)
    }
}

pub fn render_run_csv(config_hash: &str, seed: u64, rows: &[GenerationMetrics]) -> String {
    let mut s = format!("# config_hash={config_hash},seed={seed}\n{RUN_HEADER}\n");
    for m in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            m.generation,
            m.max_fitness,
            m.mean_novelty,
            m.mean_dominated_novelty,
            m.qd_score,
            m.valid_count
        );
    }
    s
}

/// Execute every replication in memory.
pub fn run_replications(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate_run()?;
    let task = build_task(cfg)?;
    let spec = build_descriptor(cfg, &task)?;
    let alg = cfg.algorithm()?;
    let bounds = task.descriptor_bounds(&spec);
    let competition = build_competition(alg, &bounds, cfg.loop_.pop_size, cfg.seed)?;
    competition.validate(spec.dim())?;
    let hash = cfg.hash();
    (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let seed = replication_seed(cfg.seed, r);
            let start = Instant::now();
            let traj = run(&cfg.loop_.with_seed(seed), &task, &spec, &competition, alg.k)?;
            Ok(RunRecord {
                replication: r,
                seed,
                config_hash: hash.clone(),
                rows: traj.snapshots,
                final_population: traj.final_population,
                wall_time_s: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(path: &Path, v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

pub fn rep_stem(r: usize) -> String {
    format!("rep_{r:03}")
}

#[derive(Serialize)]
struct RunSidecar<'a> {
    config_hash: &'a str,
    replication: usize,
    seed: u64,
    wall_time_s: f64,
}

/// Run all replications and write, per replication, `rep_XXX.csv`, the final
/// population (`rep_XXX_population.json`) and timing (`rep_XXX.json`).
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let records = run_replications(cfg)?;
    create_dir(&cfg.output_dir)?;
    for rec in &records {
        let stem = rep_stem(rec.replication);
        write_file(&cfg.output_dir.join(format!("{stem}.csv")), &rec.csv())?;
        let pop = cfg.output_dir.join(format!("{stem}_population.json"));
        write_file(&pop, &to_json(&pop, &rec.final_population)?)?;
        let side = cfg.output_dir.join(format!("{stem}.json"));
        let meta = RunSidecar {
            config_hash: &rec.config_hash,
            replication: rec.replication,
            seed: rec.seed,
            wall_time_s: rec.wall_time_s,
        };
        write_file(&side, &to_json(&side, &meta)?)?;
    }
    Ok(records)
}

pub fn render_meta_log(config_hash: &str, objective: ObjectiveKind, out: &MetaOutcome) -> String {
    let mut s = format!("# config_hash={config_hash},objective={}\n{LOG_HEADER}\n", objective.tag());
    for row in &out.log {
        s.push_str(&row.csv());
        s.push('\n');
    }
    s
}

/// Meta-train and write `meta_log.csv`, `theta_<objective>.json` and
/// `checkpoint.json` into the output directory.
pub fn cmd_meta_train(cfg: &ExperimentConfig) -> Result<MetaOutcome> {
    let mut meta = cfg
        .meta
        .clone()
        .ok_or_else(|| Error::config("meta", "missing [meta] section"))?;
    meta.seed = cfg.seed;
    meta.validate()?;
    create_dir(&cfg.output_dir)?;
    let opts = TrainOptions {
        checkpoint: Some(cfg.output_dir.join("checkpoint.json")),
        checkpoint_every: cfg.checkpoint.every,
        resume: cfg.checkpoint.resume,
    };
    let out = meta_train(&meta, &opts)?;
    let hash = cfg.hash();
    let kind = meta.objective.kind;
    write_file(&cfg.output_dir.join("meta_log.csv"), &render_meta_log(&hash, kind, &out))?;
    save_theta(
        &theta_path(&cfg.output_dir, kind),
        &ThetaFile {
            format: THETA_FORMAT.into(),
            objective: Some(kind),
            config_hash: hash,
            meta_gen: out.best_meta_gen,
            params: out.best.clone(),
        },
    )?;
    Ok(out)
}

pub fn theta_path(dir: &Path, kind: ObjectiveKind) -> PathBuf {
    dir.join(format!("theta_{}.json", kind.tag()))
}

pub fn metric_value(m: &GenerationMetrics, metric: &str) -> Result<f64> {
    Ok(match metric {
        "max_fitness" => m.max_fitness,
        "mean_novelty" => m.mean_novelty,
        "mean_dominated_novelty" => m.mean_dominated_novelty,
        "qd_score" => m.qd_score,
        "valid_count" => m.valid_count as f64,
        other => {
            return Err(Error::config(
                "metric",
                format!("unknown metric `{other}`; expected one of {RUN_HEADER} (except generation)"),
            ))
        }
    })
}

/// Final-generation value of `metric` for each `rep_XXX.csv` in `dir`.
pub fn read_final_metric(dir: &Path, metric: &str) -> Result<Vec<f64>> {
    let col = RUN_HEADER
        .split(',')
        .position(|c| c == metric && c != "generation")
        .ok_or_else(|| Error::config("metric", format!("unknown metric `{metric}`")))?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("rep_") && n.ends_with(".csv"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Input(format!("no rep_*.csv files in {}", dir.display())));
    }
    files
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            let mut lines = text.lines().filter(|l| !l.starts_with('#'));
            if lines.next() != Some(RUN_HEADER) {
                return Err(Error::Format {
                    path: p.clone(),
                    msg: "missing run header".into(),
                });
            }
            let last = lines.next_back().ok_or_else(|| Error::Format {
                path: p.clone(),
                msg: "no data rows".into(),
            })?;
            last.split(',')
                .nth(col)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| Error::Format {
                    path: p.clone(),
                    msg: format!("bad value in column {metric}"),
                })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub median_a: f64,
    pub median_b: f64,
    /// `median_a - median_b`
    pub median_diff: f64,
    pub u: f64,
    pub p_raw: f64,
    pub p_holm: f64,
}

pub const COMPARE_HEADER: &str = "a,b,metric,median_a,median_b,median_diff,u,p_raw,p_holm";

/// Two-sided rank-sum tests on final-generation values for every pair of
/// directories, Holm-adjusted across pairs.
pub fn compare_samples(named: &[(String, Vec<f64>)]) -> Result<Vec<Comparison>> {
    if named.len() < 2 {
        return Err(Error::Input("need at least two runs to compare".into()));
    }
    let n = named[0].1.len();
    if let Some((name, v)) = named.iter().find(|(_, v)| v.len() != n) {
        return Err(Error::Input(format!(
            "replication counts differ: {} has {}, {} has {n}",
            name,
            v.len(),
            named[0].0
        )));
    }
    let mut out = Vec::new();
    for i in 0..named.len() {
        for j in i + 1..named.len() {
            let (a, b) = (&named[i].1, &named[j].1);
            let t = mann_whitney(a, b, Alternative::TwoSided)?;
            let (ma, mb) = (median(a), median(b));
            out.push(Comparison {
                a: named[i].0.clone(),
                b: named[j].0.clone(),
                median_a: ma,
                median_b: mb,
                median_diff: ma - mb,
                u: t.u,
                p_raw: t.p,
                p_holm: 0.0,
            });
        }
    }
    let adj = holm(&out.iter().map(|c| c.p_raw).collect::<Vec<_>>());
    for (c, p) in out.iter_mut().zip(adj) {
        c.p_holm = p;
    }
    Ok(out)
}

pub fn cmd_compare(dirs: &[PathBuf], metric: &str) -> Result<Vec<Comparison>> {
    let named = dirs
        .iter()
        .map(|d| Ok((d.display().to_string(), read_final_metric(d, metric)?)))
        .collect::<Result<Vec<_>>>()?;
    compare_samples(&named)
}

pub fn render_comparison(rows: &[Comparison], metric: &str) -> String {
    let mut s = format!("{COMPARE_HEADER}\n");
    for c in rows {
        let _ = writeln!(
            s,
            "{},{},{metric},{},{},{},{},{},{}",
            c.a, c.b, c.median_a, c.median_b, c.median_diff, c.u, c.p_raw, c.p_holm
        );
    }
    s
}

/// Competition fitness a probe with the population's median fitness would
/// receive at each point of an `r × r` grid over the (margin-padded)
/// descriptor box of `pop`. The probe is added to the population, not
/// substituted. Rows are `[gx, gy, ftilde]`, `gx` varying slowest.
pub fn landscape_grid(
    competition: &CompetitionFn,
    pop: &Population,
    resolution: usize,
    margin: f64,
    seed: u64,
) -> Result<Vec<[f64; 3]>> {
    if pop.d.cols() != 2 {
        return Err(Error::Unsupported(format!(
            "landscapes need 2-D descriptors, population has {}",
            pop.d.cols()
        )));
    }
    if resolution == 0 {
        return Err(Error::config("landscape.resolution", "must be >= 1"));
    }
    let idx: Vec<usize> = (0..pop.len()).filter(|&i| pop.valid[i]).collect();
    if idx.is_empty() {
        return Err(Error::Input("population has no valid individuals".into()));
    }
    let f: Vec<f64> = idx.iter().map(|&i| pop.f[i]).collect();
    let d = pop.d.select_rows(&idx);
    let probe_f = median(&f);
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for row in d.iter_rows() {
        for c in 0..2 {
            lo[c] = lo[c].min(row[c]);
            hi[c] = hi[c].max(row[c]);
        }
    }
    for c in 0..2 {
        let pad = (hi[c] - lo[c]).max(1e-9) * margin.max(0.0);
        lo[c] -= pad;
        hi[c] += pad;
    }
    let axis = |c: usize, i: usize| {
        if resolution == 1 {
            0.5 * (lo[c] + hi[c])
        } else {
            lo[c] + (hi[c] - lo[c]) * i as f64 / (resolution - 1) as f64
        }
    };
    let mut fa = f.clone();
    fa.push(probe_f);
    let valid = vec![true; fa.len()];
    let mut out = Vec::with_capacity(resolution * resolution);
    for ix in 0..resolution {
        for iy in 0..resolution {
            let g = [axis(0, ix), axis(1, iy)];
            let mut da = d.clone();
            da.push_row(&g);
            let mut r = rng::stream_at(seed, &[tag::COMPETE, (ix * resolution + iy) as u64]);
            let ft = compete(competition, &fa, &da, &valid, &mut r)?;
            out.push([g[0], g[1], *ft.last().expect("probe row")]);
        }
    }
    Ok(out)
}

pub fn cmd_landscape(cfg: &ExperimentConfig) -> Result<Vec<[f64; 3]>> {
    let land = cfg
        .landscape
        .as_ref()
        .ok_or_else(|| Error::config("landscape", "missing [landscape] section"))?;
    let path = &land.population;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let pop: Population = serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.clone(),
        msg: e.to_string(),
    })?;
    let alg = cfg.algorithm()?;
    let bounds = descriptor_box(&pop)?;
    let competition = build_competition(alg, &bounds, pop.len(), cfg.seed)?;
    competition.validate(pop.d.cols())?;
    let grid = landscape_grid(&competition, &pop, land.resolution, land.margin, cfg.seed)?;
    let mut s = format!("# config_hash={},probe=augment\ngx,gy,ftilde\n", cfg.hash());
    for [x, y, v] in &grid {
        let _ = writeln!(s, "{x},{y},{v}");
    }
    create_dir(&cfg.output_dir)?;
    write_file(&cfg.output_dir.join("landscape.csv"), &s)?;
    Ok(grid)
}

fn descriptor_box(pop: &Population) -> Result<Bounds> {
    let cols = pop.d.cols();
    let mut lo = vec![f64::INFINITY; cols];
    let mut hi = vec![f64::NEG_INFINITY; cols];
    for row in pop.d.iter_rows() {
        for c in 0..cols {
            lo[c] = lo[c].min(row[c]);
            hi[c] = hi[c].max(row[c]);
        }
    }
    for c in 0..cols {
        if !(hi[c] > lo[c]) {
            lo[c] -= 0.5;
            hi[c] += 0.5;
        }
    }
    Bounds::new(lo, hi)
}

pub const ABLATION_ARMS: [&str; 3] = ["lqd_projection", "lqd_random_noise", "ga"];

/// The three ablation arms as standalone run configurations sharing the
/// master seed: learned competition with projection descriptors, the same
/// with standard-normal descriptors, and the GA.
pub fn ablation_configs(cfg: &ExperimentConfig) -> Result<[ExperimentConfig; 3]> {
    let alg = cfg.algorithm()?;
    if alg.kind != AlgorithmKind::Lqd {
        return Err(Error::config("algorithm.kind", "ablation needs kind = \"lqd\""));
    }
    let base_desc = cfg.descriptor.unwrap_or(DescriptorConfig {
        kind: DescriptorChoice::Projection,
        dim: 2,
        seed: None,
    });
    if base_desc.kind != DescriptorChoice::Projection {
        return Err(Error::config("descriptor.kind", "ablation starts from projection descriptors"));
    }
    let arm = |name: &str, alg: AlgorithmConfig, desc: DescriptorConfig| {
        let mut c = cfg.clone();
        c.output_dir = cfg.output_dir.join(name);
        c.algorithm = Some(alg);
        c.descriptor = Some(desc);
        c
    };
    Ok([
        arm(ABLATION_ARMS[0], alg.clone(), base_desc),
        arm(
            ABLATION_ARMS[1],
            alg.clone(),
            DescriptorConfig {
                kind: DescriptorChoice::RandomNoise,
                ..base_desc
            },
        ),
        arm(
            ABLATION_ARMS[2],
            AlgorithmConfig {
                kind: AlgorithmKind::Ga,
                ..alg.clone()
            },
            base_desc,
        ),
    ])
}

pub fn cmd_ablation(cfg: &ExperimentConfig) -> Result<Vec<Vec<RunRecord>>> {
    ablation_configs(cfg)?.iter().map(cmd_run).collect()
}

pub fn list_functions_table() -> String {
    let mut s = String::from("name,set,min_dim\n");
    for (set, label) in [(FunctionSet::Training, "training"), (FunctionSet::Ood, "ood")] {
        for f in list_functions(set) {
            let _ = writeln!(s, "{},{label},{}", f.name(), f.min_dim());
        }
    }
    s
}
