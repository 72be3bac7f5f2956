//! Population-level metrics: max fitness, mean novelty, mean dominated
//! novelty and the QD score (max fitness × mean dominated novelty).
//!
//! Only valid individuals count. Infinite novelty sentinels (a lone individual,
//! or the fittest individual under dominated novelty) are left out of the
//! averages; when nothing is left the mean is reported as 0 and flagged.

use serde::{Deserialize, Serialize};

use crate::competition::{dominated_novelty_scores, novelty_scores, pairwise_distances};
use crate::evoloop::Population;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationMetrics {
    pub generation: usize,
    pub max_fitness: f64,
    pub mean_novelty: f64,
    pub mean_dominated_novelty: f64,
    pub qd_score: f64,
    pub valid_count: usize,
    /// No finite novelty score to average (fewer than two valid rows).
    pub novelty_degenerate: bool,
    /// No individual had a fitter neighbour (one valid row, or all tied).
    pub dominated_degenerate: bool,
}

impl GenerationMetrics {
    pub fn is_degenerate(&self) -> bool {
        self.novelty_degenerate || self.dominated_degenerate
    }
}

/// Mean of finite entries, or `None` if there are none.
pub(crate) fn finite_mean(v: &[f64]) -> Option<f64> {
    let (s, c) = v
        .iter()
        .filter(|x| x.is_finite())
        .fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (c > 0).then(|| s / c as f64)
}

/// Valid rows only, as (fitness, distance matrix).
pub(crate) fn valid_view(pop: &Population) -> (Vec<f64>, crate::matrix::Matrix) {
    let idx: Vec<usize> = (0..pop.len()).filter(|&i| pop.valid[i]).collect();
    let f = idx.iter().map(|&i| pop.f[i]).collect();
    (f, pairwise_distances(&pop.d.select_rows(&idx)))
}

pub fn compute_metrics(pop: &Population, k: usize) -> GenerationMetrics {
    let k = k.max(1);
    let (f, dist) = valid_view(pop);
    if f.is_empty() {
        return GenerationMetrics {
            generation: pop.generation,
            max_fitness: f64::NEG_INFINITY,
            mean_novelty: 0.0,
            mean_dominated_novelty: 0.0,
            qd_score: 0.0,
            valid_count: 0,
            novelty_degenerate: true,
            dominated_degenerate: true,
        };
    }
    let max_fitness = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let nov = finite_mean(&novelty_scores(&dist, k));
    let dom = finite_mean(&dominated_novelty_scores(&f, &dist, k));
    let mean_dominated_novelty = dom.unwrap_or(0.0);
    GenerationMetrics {
        generation: pop.generation,
        max_fitness,
        mean_novelty: nov.unwrap_or(0.0),
        mean_dominated_novelty,
        qd_score: max_fitness * mean_dominated_novelty,
        valid_count: f.len(),
        novelty_degenerate: nov.is_none(),
        dominated_degenerate: dom.is_none(),
    }
}

/// Element-wise `series / baseline`; `None` marks a zero (or non-finite)
/// baseline entry that could not be divided.
pub fn normalize_to_baseline(series: &[f64], baseline: &[f64]) -> Vec<Option<f64>> {
    series
        .iter()
        .zip(baseline)
        .map(|(&s, &b)| (b != 0.0 && b.is_finite()).then(|| s / b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn pop(f: &[f64], d: &[f64]) -> Population {
        let n = f.len();
        Population {
            x: Matrix::zeros(n, 1),
            f: f.to_vec(),
            d: Matrix::from_vec(n, 1, d.to_vec()),
            valid: vec![true; n],
            generation: 3,
        }
    }

    #[test]
    fn hand_population() {
        let m = compute_metrics(&pop(&[3.0, 1.0, 2.0], &[0.0, 1.0, 2.0]), 1);
        assert_eq!(m.max_fitness, 3.0);
        assert_eq!(m.mean_dominated_novelty, 1.5);
        assert_eq!(m.qd_score, 4.5);
        assert_eq!(m.valid_count, 3);
        assert!(!m.is_degenerate());
    }

    #[test]
    fn lone_individual_is_degenerate() {
        let m = compute_metrics(&pop(&[-2.0], &[0.3]), 3);
        assert_eq!(m.max_fitness, -2.0);
        assert!(m.novelty_degenerate);
        assert_eq!(m.mean_novelty, 0.0);
    }

    #[test]
    fn invalid_rows_ignored() {
        let mut p = pop(&[3.0, 100.0, 1.0], &[0.0, 50.0, 1.0]);
        p.valid[1] = false;
        let m = compute_metrics(&p, 1);
        assert_eq!(m.max_fitness, 3.0);
        assert_eq!(m.mean_novelty, 1.0);
        assert_eq!(m.valid_count, 2);
        let mut q = p.clone();
        q.valid = vec![false; 3];
        assert_eq!(compute_metrics(&q, 1).valid_count, 0);
    }

    #[test]
    fn collapsed_population_has_zero_novelty() {
        let m = compute_metrics(&pop(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]), 2);
        assert_eq!(m.mean_novelty, 0.0);
        assert!(!m.novelty_degenerate);
    }

    #[test]
    fn permutation_invariant() {
        let a = compute_metrics(&pop(&[3.0, 1.0, 2.0, 0.5], &[0.0, 1.0, 2.0, 7.0]), 2);
        let b = compute_metrics(&pop(&[0.5, 2.0, 3.0, 1.0], &[7.0, 2.0, 0.0, 1.0]), 2);
        assert!((a.mean_novelty - b.mean_novelty).abs() < 1e-12);
        assert!((a.mean_dominated_novelty - b.mean_dominated_novelty).abs() < 1e-12);
        assert_eq!(a.max_fitness, b.max_fitness);
    }

    #[test]
    fn baseline_ratio() {
        let s = [1.0, 2.0, 3.0];
        assert_eq!(normalize_to_baseline(&s, &s), vec![Some(1.0); 3]);
        assert_eq!(
            normalize_to_baseline(&[1.0, 2.0], &[0.0, 4.0]),
            vec![None, Some(0.5)]
        );
        let doubled: Vec<f64> = s.iter().map(|v| 2.0 * v).collect();
        let base = [0.5, 4.0, -1.0];
        for (a, b) in normalize_to_baseline(&doubled, &base)
            .into_iter()
            .zip(normalize_to_baseline(&s, &base))
        {
            assert_eq!(a.unwrap(), 2.0 * b.unwrap());
        }
    }
}
