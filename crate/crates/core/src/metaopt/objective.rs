//! Scoring a finished inner-loop run, and turning a candidates × tasks score
//! table into one meta-fitness per candidate.

use serde::{Deserialize, Serialize};

use crate::competition::DEFAULT_K;
use crate::evoloop::Trajectory;
use crate::matrix::Matrix;
use crate::metrics::GenerationMetrics;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Highest fitness in the population.
    #[serde(rename = "f")]
    Fitness,
    /// Mean novelty across the population.
    #[serde(rename = "n")]
    Novelty,
    /// Highest fitness times mean dominated novelty.
    #[serde(rename = "f_plus_n")]
    FitnessNovelty,
}

impl ObjectiveKind {
    pub fn tag(self) -> &'static str {
        match self {
            ObjectiveKind::Fitness => "f",
            ObjectiveKind::Novelty => "n",
            ObjectiveKind::FitnessNovelty => "f_plus_n",
        }
    }
}

impl std::str::FromStr for ObjectiveKind {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" | "fitness" => Ok(ObjectiveKind::Fitness),
            "n" | "novelty" => Ok(ObjectiveKind::Novelty),
            "f_plus_n" | "f+n" | "fplusn" | "qd" => Ok(ObjectiveKind::FitnessNovelty),
            other => Err(crate::error::Error::config(
                "meta.objective.kind",
                format!("unknown objective `{other}` (expected f, n or f_plus_n)"),
            )),
        }
    }
}

/// Which generations of the inner run contribute.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Temporal {
    #[default]
    Final,
    MeanOverGenerations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaObjective {
    pub kind: ObjectiveKind,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub temporal: Temporal,
}

fn default_k() -> usize {
    DEFAULT_K
}

impl MetaObjective {
    pub fn new(kind: ObjectiveKind) -> Self {
        Self {
            kind,
            k: DEFAULT_K,
            temporal: Temporal::Final,
        }
    }
}

/// Score of one generation's metrics; `-inf` when nothing valid is left.
pub fn generation_value(m: &GenerationMetrics, kind: ObjectiveKind) -> f64 {
    if m.valid_count == 0 {
        return f64::NEG_INFINITY;
    }
    match kind {
        ObjectiveKind::Fitness => m.max_fitness,
        ObjectiveKind::Novelty => m.mean_novelty,
        ObjectiveKind::FitnessNovelty => m.qd_score,
    }
}

/// The trajectory's metrics must have been computed with `objective.k`.
pub fn meta_objective_value(traj: &Trajectory, objective: &MetaObjective) -> f64 {
    match objective.temporal {
        Temporal::Final => traj
            .snapshots
            .last()
            .map_or(f64::NEG_INFINITY, |m| generation_value(m, objective.kind)),
        Temporal::MeanOverGenerations => {
            if traj.snapshots.is_empty() {
                return f64::NEG_INFINITY;
            }
            let sum: f64 = traj
                .snapshots
                .iter()
                .map(|m| generation_value(m, objective.kind))
                .sum();
            sum / traj.snapshots.len() as f64
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    ZScore,
    Rank,
}

pub const NORMALIZE_EPS: f64 = 1e-12;

/// Rows are candidates, columns tasks. Each column is normalized across
/// candidates (non-finite entries first replaced by the column's finite
/// minimum) and the row means are returned.
pub fn normalize_aggregate(scores: &Matrix, method: Normalization) -> Vec<f64> {
    let (m, k) = (scores.rows(), scores.cols());
    let mut total = vec![0.0; m];
    if m == 0 || k == 0 {
        return total;
    }
    let mut col = vec![0.0; m];
    for j in 0..k {
        let floor = (0..m)
            .map(|i| scores[(i, j)])
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, f64::min);
        for (i, c) in col.iter_mut().enumerate() {
            let v = scores[(i, j)];
            *c = if v.is_finite() {
                v
            } else if floor.is_finite() {
                floor
            } else {
                0.0
            };
        }
        let normed = match method {
            Normalization::ZScore => zscore(&col),
            Normalization::Rank => centered_ranks(&col),
        };
        for (t, v) in total.iter_mut().zip(normed) {
            *t += v;
        }
    }
    total.iter().map(|t| t / k as f64).collect()
}

fn zscore(v: &[f64]) -> Vec<f64> {
    let (mean, sd) = crate::matrix::mean_std(v);
    if sd < NORMALIZE_EPS {
        return vec![0.0; v.len()];
    }
    v.iter().map(|x| (x - mean) / sd).collect()
}

/// Mid-ranks mapped linearly onto [-0.5, 0.5].
fn centered_ranks(v: &[f64]) -> Vec<f64> {
    let m = v.len();
    if m < 2 {
        return vec![0.0; m];
    }
    let r = crate::stats::midranks(v);
    r.iter().map(|x| (x - 1.0) / (m as f64 - 1.0) - 0.5).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evoloop::Population;
    use crate::metrics::compute_metrics;

    fn traj(f: &[f64], d: &[f64], k: usize) -> Trajectory {
        let n = f.len();
        let pop = Population {
            x: Matrix::zeros(n, 1),
            f: f.to_vec(),
            d: Matrix::from_vec(n, 1, d.to_vec()),
            valid: vec![true; n],
            generation: 1,
        };
        Trajectory {
            snapshots: vec![compute_metrics(&pop, k)],
            final_population: pop,
        }
    }

    fn obj(kind: ObjectiveKind, k: usize) -> MetaObjective {
        MetaObjective {
            kind,
            k,
            temporal: Temporal::Final,
        }
    }

    #[test]
    fn hand_examples() {
        let t = traj(&[1.0, 5.0, 3.0], &[0.0, 1.0, 2.0], 1);
        assert_eq!(meta_objective_value(&t, &obj(ObjectiveKind::Fitness, 1)), 5.0);
        let t = traj(&[1.0, 1.0], &[0.0, 2.0], 1);
        assert_eq!(meta_objective_value(&t, &obj(ObjectiveKind::Novelty, 1)), 2.0);
        let t = traj(&[3.0, 1.0, 2.0], &[0.0, 1.0, 2.0], 1);
        assert_eq!(meta_objective_value(&t, &obj(ObjectiveKind::FitnessNovelty, 1)), 4.5);
    }

    #[test]
    fn no_valid_is_worst() {
        let mut t = traj(&[1.0], &[0.0], 1);
        t.final_population.valid[0] = false;
        t.snapshots = vec![compute_metrics(&t.final_population, 1)];
        assert_eq!(
            meta_objective_value(&t, &obj(ObjectiveKind::Fitness, 1)),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn zscore_column() {
        let s = Matrix::from_vec(3, 1, vec![1.0, 2.0, 3.0]);
        let z = normalize_aggregate(&s, Normalization::ZScore);
        assert!((z[0] + 1.224_744_871_391_589).abs() < 1e-12);
        assert_eq!(z[1], 0.0);
        assert!((z[2] - 1.224_744_871_391_589).abs() < 1e-12);
        let c = Matrix::from_vec(3, 1, vec![4.0; 3]);
        assert_eq!(normalize_aggregate(&c, Normalization::ZScore), vec![0.0; 3]);
    }

    #[test]
    fn column_shift_invariance_and_sentinels() {
        let a = Matrix::from_rows(&[vec![1.0, 10.0], vec![2.0, 30.0], vec![0.5, 20.0]]);
        let b = Matrix::from_rows(&[vec![101.0, 10.0], vec![102.0, 30.0], vec![100.5, 20.0]]);
        let (za, zb) = (
            normalize_aggregate(&a, Normalization::ZScore),
            normalize_aggregate(&b, Normalization::ZScore),
        );
        for (x, y) in za.iter().zip(&zb) {
            assert!((x - y).abs() < 1e-12);
        }
        let s = Matrix::from_rows(&[vec![f64::NEG_INFINITY], vec![1.0], vec![3.0]]);
        let z = normalize_aggregate(&s, Normalization::ZScore);
        assert_eq!(z[0], z[1]);
        assert!(z[2] > z[1]);
    }

    #[test]
    fn rank_normalization() {
        let s = Matrix::from_vec(4, 1, vec![10.0, -3.0, 7.0, 7.0]);
        assert_eq!(
            normalize_aggregate(&s, Normalization::Rank),
            vec![0.5, -0.5, 0.0, 0.0]
        );
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("F".parse::<ObjectiveKind>().unwrap(), ObjectiveKind::Fitness);
        assert_eq!("f+n".parse::<ObjectiveKind>().unwrap(), ObjectiveKind::FitnessNovelty);
        assert!("x".parse::<ObjectiveKind>().is_err());
    }
}
