//! Centroidal Voronoi tessellation of a descriptor box via Lloyd iterations.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng;

/// Axis-aligned box in descriptor space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl Bounds {
    pub fn new(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        if low.len() != high.len() || low.is_empty() {
            return Err(Error::Dimension("bounds need matching, non-empty low/high".into()));
        }
        if low.iter().zip(&high).any(|(l, h)| !(l < h)) {
            return Err(Error::Input("bounds need low < high in every dimension".into()));
        }
        Ok(Self { low, high })
    }

    pub fn uniform(dim: usize, low: f64, high: f64) -> Self {
        Self {
            low: vec![low; dim],
            high: vec![high; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.low
            .iter()
            .zip(&self.high)
            .map(|(l, h)| 0.5 * (l + h))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentroidSet {
    pub centroids: Matrix,
    pub seed: u64,
}

impl CentroidSet {
    pub fn len(&self) -> usize {
        self.centroids.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.centroids.cols()
    }

    /// Index of the nearest centroid; ties go to the lower index.
    pub fn nearest(&self, d: &[f64]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in self.centroids.iter_rows().enumerate() {
            let dist: f64 = c.iter().zip(d).map(|(a, b)| (a - b) * (a - b)).sum();
            if dist < best_d {
                best_d = dist;
                best = i;
            }
        }
        best
    }
}

pub const SAMPLES_PER_CENTROID: usize = 50;
pub const LLOYD_ITERATIONS: usize = 100;

pub fn build_centroids(count: usize, bounds: &Bounds, seed: u64) -> Result<CentroidSet> {
    if count == 0 {
        return Err(Error::Input("need at least one centroid".into()));
    }
    let dim = bounds.dim();
    let mut rng = rng::stream_at(seed, &[rng::tag::CENTROIDS]);
    let n_samples = SAMPLES_PER_CENTROID * count;
    let mut samples = Matrix::zeros(n_samples, dim);
    for i in 0..n_samples {
        for (j, v) in samples.row_mut(i).iter_mut().enumerate() {
            *v = rng.gen_range(bounds.low[j]..bounds.high[j]);
        }
    }

    let init = sample(&mut rng, n_samples, count).into_vec();
    let mut centroids = samples.select_rows(&init);
    let mut assign = vec![0usize; n_samples];
    for _ in 0..LLOYD_ITERATIONS {
        let set = CentroidSet {
            centroids: centroids.clone(),
            seed,
        };
        for (i, a) in assign.iter_mut().enumerate() {
            *a = set.nearest(samples.row(i));
        }
        let mut sums = Matrix::zeros(count, dim);
        let mut counts = vec![0usize; count];
        for (i, &a) in assign.iter().enumerate() {
            counts[a] += 1;
            for (s, v) in sums.row_mut(a).iter_mut().zip(samples.row(i)) {
                *s += v;
            }
        }
        for c in 0..count {
            // empty cells keep their previous position
            if counts[c] > 0 {
                let inv = 1.0 / counts[c] as f64;
                for (dst, s) in centroids.row_mut(c).iter_mut().zip(sums.row(c)) {
                    *dst = s * inv;
                }
            }
        }
    }
    Ok(CentroidSet { centroids, seed })
}
