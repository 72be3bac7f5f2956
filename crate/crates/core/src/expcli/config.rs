//! Experiment configuration, read from TOML. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::armtask::ArmSpec;
use crate::benchfn::{FunctionId, NoiseSpec};
use crate::competition::DEFAULT_K;
use crate::error::{Error, Result};
use crate::evoloop::LoopConfig;
use crate::metaopt::{hash_json, MetaConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum TaskConfig {
    Bbob {
        function: FunctionId,
        dim: usize,
        #[serde(default)]
        noise: NoiseSpec,
        /// Instance (rotation, shift) seed; derived from the master seed when absent.
        #[serde(default)]
        instance_seed: Option<u64>,
    },
    Arm {
        #[serde(default = "default_joints")]
        joints: usize,
    },
}

fn default_joints() -> usize {
    ArmSpec::default().joints
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    /// Truncation selection on raw fitness.
    Ga,
    /// Survivors chosen at random.
    Random,
    MapElites,
    NoveltySearch,
    DominatedNovelty,
    /// Meta-trained competition loaded from `theta`.
    Lqd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    #[serde(default = "default_k")]
    pub k: usize,
    /// Number of CVT cells; defaults to the population size.
    #[serde(default)]
    pub centroids: Option<usize>,
    #[serde(default)]
    pub theta: Option<PathBuf>,
}

fn default_k() -> usize {
    DEFAULT_K
}

impl AlgorithmConfig {
    pub fn of(kind: AlgorithmKind) -> Self {
        Self {
            kind,
            k: DEFAULT_K,
            centroids: None,
            theta: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoopSection {
    pub pop_size: usize,
    pub batch_size: usize,
    pub generations: usize,
    pub mutation_sigma: f64,
}

impl Default for LoopSection {
    fn default() -> Self {
        let d = LoopConfig::default();
        Self {
            pop_size: d.pop_size,
            batch_size: d.batch_size,
            generations: d.generations,
            mutation_sigma: d.mutation_sigma,
        }
    }
}

impl LoopSection {
    pub fn with_seed(&self, seed: u64) -> LoopConfig {
        LoopConfig {
            pop_size: self.pop_size,
            batch_size: self.batch_size,
            generations: self.generations,
            mutation_sigma: self.mutation_sigma,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorChoice {
    Projection,
    TaskSpecific,
    RandomNoise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorConfig {
    pub kind: DescriptorChoice,
    #[serde(default = "default_descriptor_dim")]
    pub dim: usize,
    /// Projection seed; derived from the master seed when absent.
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_descriptor_dim() -> usize {
    2
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckpointSection {
    /// Meta-generations between checkpoint writes (0 = only at the end).
    pub every: usize,
    /// Continue from an existing checkpoint in the output directory.
    pub resume: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandscapeSection {
    /// Population snapshot written by `run` (`rep_XXX_population.json`).
    pub population: PathBuf,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Fraction of the population's descriptor extent added on each side.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_resolution() -> usize {
    32
}

fn default_margin() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default = "default_replications")]
    pub replications: usize,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub task: Option<TaskConfig>,
    #[serde(default)]
    pub algorithm: Option<AlgorithmConfig>,
    #[serde(default, rename = "loop")]
    pub loop_: LoopSection,
    #[serde(default)]
    pub descriptor: Option<DescriptorConfig>,
    #[serde(default)]
    pub meta: Option<MetaConfig>,
    #[serde(default)]
    pub checkpoint: CheckpointSection,
    #[serde(default)]
    pub landscape: Option<LandscapeSection>,
}

fn default_replications() -> usize {
    1
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            // serde reports the offending key in backticks
            let key = msg
                .split('`')
                .nth(1)
                .map(str::to_string)
                .unwrap_or_else(|| "config".into());
            Error::config(key, msg)
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        // relative paths inside the file are relative to the file
        if let Some(base) = path.parent() {
            let fix = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            };
            fix(&mut cfg.output_dir);
            if let Some(a) = cfg.algorithm.as_mut() {
                a.theta.as_mut().map(fix);
            }
            if let Some(l) = cfg.landscape.as_mut() {
                fix(&mut l.population);
            }
        }
        Ok(cfg)
    }

    /// SHA-256 of the canonical JSON encoding of the parsed configuration.
    pub fn hash(&self) -> String {
        hash_json(self)
    }

    pub fn task(&self) -> Result<&TaskConfig> {
        self.task
            .as_ref()
            .ok_or_else(|| Error::config("task", "missing [task] section"))
    }

    pub fn algorithm(&self) -> Result<&AlgorithmConfig> {
        self.algorithm
            .as_ref()
            .ok_or_else(|| Error::config("algorithm", "missing [algorithm] section"))
    }

    pub fn validate_run(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::config("replications", "must be >= 1"));
        }
        match self.task()? {
            TaskConfig::Bbob { function, dim, noise, .. } => {
                if *dim < function.min_dim() {
                    return Err(Error::config(
                        "task.dim",
                        format!("{function} needs at least {} dimensions", function.min_dim()),
                    ));
                }
                noise.validate()?;
            }
            TaskConfig::Arm { joints } => {
                if *joints == 0 {
                    return Err(Error::config("task.joints", "must be >= 1"));
                }
            }
        }
        let alg = self.algorithm()?;
        if alg.k == 0 {
            return Err(Error::config("algorithm.k", "must be >= 1"));
        }
        if alg.centroids == Some(0) {
            return Err(Error::config("algorithm.centroids", "must be >= 1"));
        }
        if alg.kind == AlgorithmKind::Lqd && alg.theta.is_none() {
            return Err(Error::config("algorithm.theta", "lqd needs a parameter file"));
        }
        if let Some(d) = &self.descriptor {
            if d.dim == 0 {
                return Err(Error::config("descriptor.dim", "must be >= 1"));
            }
        }
        self.loop_.with_seed(0).validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUN: &str = r#"
seed = 3
replications = 2
output_dir = "out"

[task]
kind = "bbob"
function = "rastrigin"
dim = 2

[algorithm]
kind = "dominated_novelty"

[loop]
pop_size = 16
generations = 4

[descriptor]
kind = "projection"
"#;

    #[test]
    fn parses_and_hashes() {
        let c = ExperimentConfig::from_toml(RUN).unwrap();
        assert_eq!(c.loop_.pop_size, 16);
        assert_eq!(c.loop_.batch_size, 32);
        assert_eq!(c.algorithm().unwrap().k, 3);
        c.validate_run().unwrap();
        assert_eq!(c.hash(), ExperimentConfig::from_toml(RUN).unwrap().hash());
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn unknown_key_names_the_key() {
        let bad = RUN.replace("pop_size", "pop_sise");
        match ExperimentConfig::from_toml(&bad) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "pop_sise"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_checks() {
        let c = ExperimentConfig::from_toml(&RUN.replace("dim = 2", "dim = 1").replace("rastrigin", "rosenbrock"))
            .unwrap();
        assert!(matches!(c.validate_run(), Err(Error::Config { .. })));
        let c = ExperimentConfig::from_toml(&RUN.replace("dominated_novelty", "lqd")).unwrap();
        assert!(matches!(c.validate_run(), Err(Error::Config { key, .. }) if key == "algorithm.theta"));
    }
}
