//! Straightforward reference implementations shared by the integration tests.

#![allow(dead_code)]

use lqd::matrix::Matrix;
use lqd::rng::Stream;
use rand::Rng;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn mean_k_nearest(mut ds: Vec<f64>, k: usize) -> f64 {
    if ds.is_empty() {
        return f64::INFINITY;
    }
    ds.sort_by(f64::total_cmp);
    ds.truncate(k);
    ds.iter().sum::<f64>() / ds.len() as f64
}

pub fn naive_novelty(d: &Matrix, k: usize) -> Vec<f64> {
    let n = d.rows();
    (0..n)
        .map(|i| {
            let ds = (0..n).filter(|&j| j != i).map(|j| dist(d.row(i), d.row(j))).collect();
            mean_k_nearest(ds, k)
        })
        .collect()
}

pub fn naive_dominated_novelty(f: &[f64], d: &Matrix, k: usize) -> Vec<f64> {
    let n = d.rows();
    (0..n)
        .map(|i| {
            let ds = (0..n).filter(|&j| f[j] > f[i]).map(|j| dist(d.row(i), d.row(j))).collect();
            mean_k_nearest(ds, k)
        })
        .collect()
}

/// Each individual keeps its fitness only if no one in its cell beats it
/// (earlier index wins a tie).
pub fn naive_map_elites(f: &[f64], d: &Matrix, centroids: &Matrix) -> Vec<f64> {
    let cell = |row: &[f64]| {
        let mut best = (f64::INFINITY, 0);
        for c in 0..centroids.rows() {
            let v: f64 = centroids.row(c).iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum();
            if v < best.0 {
                best = (v, c);
            }
        }
        best.1
    };
    let cells: Vec<usize> = d.iter_rows().map(cell).collect();
    (0..f.len())
        .map(|i| {
            let beaten = (0..f.len()).any(|j| {
                cells[j] == cells[i] && (f[j] > f[i] || (f[j] == f[i] && j < i))
            });
            if beaten {
                f64::NEG_INFINITY
            } else {
                f[i]
            }
        })
        .collect()
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut Stream, lo: f64, hi: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect();
    Matrix::from_vec(rows, cols, data)
}

pub fn random_vec(n: usize, rng: &mut Stream, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

pub fn permutation(n: usize, rng: &mut Stream) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

/// Max relative difference with infinities required to match exactly.
pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if x.is_infinite() || y.is_infinite() {
                if x == y {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (x - y).abs() / x.abs().max(y.abs()).max(1e-300)
            }
        })
        .fold(0.0, f64::max)
}
