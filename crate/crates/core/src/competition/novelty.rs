//! Novelty and dominated-novelty scores over the current population.

use crate::matrix::{euclidean, Matrix};

/// Full symmetric matrix of Euclidean distances between descriptor rows.
pub fn pairwise_distances(d: &Matrix) -> Matrix {
    let n = d.rows();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = euclidean(d.row(i), d.row(j));
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Mean of the `k` smallest values (all of them if fewer), summed in
/// ascending order; `+∞` when `values` is empty.
fn mean_of_k_smallest(values: &mut Vec<f64>, k: usize) -> f64 {
    if values.is_empty() {
        return f64::INFINITY;
    }
    let take = k.min(values.len());
    if take < values.len() {
        values.select_nth_unstable_by(take - 1, f64::total_cmp);
        values.truncate(take);
    }
    values.sort_unstable_by(f64::total_cmp);
    values.iter().sum::<f64>() / take as f64
}

/// Average distance to the `k` nearest other individuals.
pub fn novelty_scores(dist: &Matrix, k: usize) -> Vec<f64> {
    let n = dist.rows();
    let mut buf = Vec::with_capacity(n);
    (0..n)
        .map(|i| {
            buf.clear();
            buf.extend((0..n).filter(|&j| j != i).map(|j| dist[(i, j)]));
            mean_of_k_smallest(&mut buf, k)
        })
        .collect()
}

/// Average distance to the `k` nearest strictly fitter individuals.
pub fn dominated_novelty_scores(f: &[f64], dist: &Matrix, k: usize) -> Vec<f64> {
    let n = dist.rows();
    let mut buf = Vec::with_capacity(n);
    (0..n)
        .map(|i| {
            buf.clear();
            buf.extend((0..n).filter(|&j| f[j] > f[i]).map(|j| dist[(i, j)]));
            mean_of_k_smallest(&mut buf, k)
        })
        .collect()
}
