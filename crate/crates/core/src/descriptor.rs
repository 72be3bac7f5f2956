//! Descriptor extraction.
//!
//! Benchmark functions have no natural behaviour space, so each task is paired
//! with a random Gaussian projection `d = P x` that approximately preserves
//! pairwise distances between genotypes. Tasks that come with their own
//! descriptor (the arm) pass it through, and the `random_noise` mode replaces
//! descriptors with standard-normal draws for ablations.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{self, Stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionDescriptor {
    /// D × n projection with independent standard-normal entries.
    pub matrix: Matrix,
    pub seed: u64,
}

impl ProjectionDescriptor {
    pub fn input_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.rows()
    }
}

pub fn sample_projection(n: usize, d: usize, seed: u64) -> Result<ProjectionDescriptor> {
    if n == 0 || d == 0 {
        return Err(Error::Dimension(format!(
            "projection needs n >= 1 and D >= 1, got n={n}, D={d}"
        )));
    }
    let mut rng = rng::stream_at(seed, &[rng::tag::PROJECTION]);
    let data = (0..n * d).map(|_| rng.sample(StandardNormal)).collect();
    Ok(ProjectionDescriptor {
        matrix: Matrix::from_vec(d, n, data),
        seed,
    })
}

pub fn describe(proj: &ProjectionDescriptor, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != proj.input_dim() {
        return Err(Error::Input(format!(
            "projection expects length {}, got {}",
            proj.input_dim(),
            x.len()
        )));
    }
    Ok(proj.matrix.mul_vec(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorKind {
    Projection,
    TaskSpecific,
    RandomNoise,
}

/// How descriptors are obtained for a run.
#[derive(Clone, Debug, PartialEq)]
pub enum DescriptorSpec {
    Projection(ProjectionDescriptor),
    /// Use the descriptor reported by the task itself.
    TaskSpecific { dim: usize },
    /// Ablation: i.i.d. standard-normal descriptors, unrelated to the genotype.
    RandomNoise { dim: usize },
}

impl DescriptorSpec {
    pub fn kind(&self) -> DescriptorKind {
        match self {
            DescriptorSpec::Projection(_) => DescriptorKind::Projection,
            DescriptorSpec::TaskSpecific { .. } => DescriptorKind::TaskSpecific,
            DescriptorSpec::RandomNoise { .. } => DescriptorKind::RandomNoise,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DescriptorSpec::Projection(p) => p.output_dim(),
            DescriptorSpec::TaskSpecific { dim } | DescriptorSpec::RandomNoise { dim } => *dim,
        }
    }

    /// Descriptor of genotype `x`. `task_descriptor` is whatever the task
    /// reported; `rng` is the per-individual evaluation stream.
    pub fn descriptor(
        &self,
        x: &[f64],
        task_descriptor: Option<&[f64]>,
        rng: &mut Stream,
    ) -> Result<Vec<f64>> {
        match self {
            DescriptorSpec::Projection(p) => describe(p, x),
            DescriptorSpec::TaskSpecific { dim } => match task_descriptor {
                Some(d) if d.len() == *dim => Ok(d.to_vec()),
                Some(d) => Err(Error::Dimension(format!(
                    "task descriptor has length {}, expected {dim}",
                    d.len()
                ))),
                None => Err(Error::Unsupported(
                    "task does not provide a descriptor".into(),
                )),
            },
            DescriptorSpec::RandomNoise { dim } => {
                Ok((0..*dim).map(|_| rng.sample(StandardNormal)).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{euclidean, mean_std};
    use crate::rng::stream;

    #[test]
    fn deterministic() {
        assert_eq!(
            sample_projection(4, 2, 7).unwrap(),
            sample_projection(4, 2, 7).unwrap()
        );
        assert_ne!(
            sample_projection(4, 2, 7).unwrap(),
            sample_projection(4, 2, 8).unwrap()
        );
    }

    #[test]
    fn entries_are_standard_normal() {
        let p = sample_projection(50, 20, 3).unwrap();
        let (m, s) = mean_std(p.matrix.as_slice());
        assert!(m.abs() < 0.1, "{m}");
        assert!((s * s - 1.0).abs() < 0.1, "{}", s * s);
    }

    #[test]
    fn identity_and_zero() {
        let p = ProjectionDescriptor {
            matrix: Matrix::identity(2),
            seed: 0,
        };
        assert_eq!(describe(&p, &[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
        let q = sample_projection(5, 3, 1).unwrap();
        assert_eq!(describe(&q, &[0.0; 5]).unwrap(), vec![0.0; 3]);
        assert!(describe(&q, &[0.0; 4]).is_err());
        assert!(sample_projection(0, 2, 1).is_err());
    }

    #[test]
    fn linear() {
        let p = sample_projection(6, 3, 11).unwrap();
        let x = [0.3, -1.0, 2.0, 0.5, 0.1, -0.7];
        let y = [1.3, 0.2, -0.4, 0.0, 2.2, 0.9];
        let (a, b) = (1.5, -0.25);
        let lhs: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let lhs = describe(&p, &lhs).unwrap();
        let dx = describe(&p, &x).unwrap();
        let dy = describe(&p, &y).unwrap();
        for i in 0..3 {
            assert!((lhs[i] - (a * dx[i] + b * dy[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_ratio_concentrates() {
        // Gaussian projection: E‖P(x-y)‖² = D‖x-y‖², so the ratio below
        // concentrates around 1.
        let (n, d) = (32, 8);
        let p = sample_projection(n, d, 5).unwrap();
        let mut rng = stream(99);
        let mut ratios: Vec<f64> = (0..100)
            .map(|_| {
                let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let y: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let px = describe(&p, &x).unwrap();
                let py = describe(&p, &y).unwrap();
                euclidean(&px, &py) / ((d as f64).sqrt() * euclidean(&x, &y))
            })
            .collect();
        ratios.sort_by(f64::total_cmp);
        let median = 0.5 * (ratios[49] + ratios[50]);
        assert!((0.6..=1.4).contains(&median), "{median}");
    }

    #[test]
    fn random_noise_ignores_genotype() {
        let spec = DescriptorSpec::RandomNoise { dim: 2 };
        let mut r1 = stream(1);
        let mut r2 = stream(2);
        let a = spec.descriptor(&[0.0, 0.0], None, &mut r1).unwrap();
        let b = spec.descriptor(&[0.0, 0.0], None, &mut r2).unwrap();
        assert_ne!(a, b);
        let mut r = stream(3);
        let draws: Vec<f64> = (0..20_000)
            .flat_map(|_| spec.descriptor(&[1.0], None, &mut r).unwrap())
            .collect();
        let (m, s) = mean_std(&draws);
        assert!(m.abs() < 0.03 && (s - 1.0).abs() < 0.03);
    }

    #[test]
    fn task_specific_passthrough() {
        let spec = DescriptorSpec::TaskSpecific { dim: 2 };
        let mut r = stream(0);
        assert_eq!(
            spec.descriptor(&[9.0], Some(&[0.5, 0.25]), &mut r).unwrap(),
            vec![0.5, 0.25]
        );
        assert!(spec.descriptor(&[9.0], None, &mut r).is_err());
        assert!(spec.descriptor(&[9.0], Some(&[1.0]), &mut r).is_err());
    }
}
