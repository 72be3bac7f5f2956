//! Competition functions: rules that turn raw fitness and descriptors of the
//! combined parent+offspring population into the competition fitness used
//! for truncation selection.

mod centroids;
mod novelty;

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lqdnet::LqdModel;
use crate::matrix::Matrix;
use crate::rng::Stream;

pub use centroids::{build_centroids, Bounds, CentroidSet, LLOYD_ITERATIONS, SAMPLES_PER_CENTROID};
pub use novelty::{dominated_novelty_scores, novelty_scores, pairwise_distances};

pub const DEFAULT_K: usize = 3;

#[derive(Clone, Debug)]
pub enum CompetitionFn {
    Identity,
    Random,
    MapElites(Arc<CentroidSet>),
    Novelty { k: usize },
    DominatedNovelty { k: usize },
    Learned(Arc<LqdModel>),
}

impl CompetitionFn {
    pub fn name(&self) -> &'static str {
        match self {
            CompetitionFn::Identity => "identity",
            CompetitionFn::Random => "random",
            CompetitionFn::MapElites(_) => "map_elites",
            CompetitionFn::Novelty { .. } => "novelty",
            CompetitionFn::DominatedNovelty { .. } => "dominated_novelty",
            CompetitionFn::Learned(_) => "learned",
        }
    }

    pub fn validate(&self, descriptor_dim: usize) -> Result<()> {
        match self {
            CompetitionFn::Novelty { k } | CompetitionFn::DominatedNovelty { k } if *k == 0 => {
                Err(Error::config("k", "neighbour count must be >= 1"))
            }
            CompetitionFn::MapElites(c) if c.is_empty() => {
                Err(Error::config("centroids", "need at least one centroid"))
            }
            CompetitionFn::MapElites(c) if c.dim() != descriptor_dim => Err(Error::config(
                "centroids",
                format!(
                    "centroid dimension {} does not match descriptor dimension {descriptor_dim}",
                    c.dim()
                ),
            )),
            CompetitionFn::Learned(m) if m.descriptor_dim() != descriptor_dim => {
                Err(Error::config(
                    "theta",
                    format!(
                        "parameters were laid out for D={}, descriptors have D={descriptor_dim}",
                        m.descriptor_dim()
                    ),
                ))
            }
            _ => Ok(()),
        }
    }
}

pub fn identity_competition(f: &[f64]) -> Vec<f64> {
    f.to_vec()
}

/// I.i.d. U[0, 1) values, one per row, drawn in row order.
pub fn random_competition(size: usize, rng: &mut Stream) -> Vec<f64> {
    (0..size).map(|_| rng.gen::<f64>()).collect()
}

/// Per cell, only the fittest member keeps its fitness; the rest get -∞.
pub fn map_elites_competition(f: &[f64], d: &Matrix, centroids: &CentroidSet) -> Vec<f64> {
    let cells: Vec<usize> = d.iter_rows().map(|row| centroids.nearest(row)).collect();
    let mut elite: Vec<Option<usize>> = vec![None; centroids.len()];
    for (i, &c) in cells.iter().enumerate() {
        match elite[c] {
            Some(j) if f[j] >= f[i] => {}
            _ => elite[c] = Some(i),
        }
    }
    let mut out = vec![f64::NEG_INFINITY; f.len()];
    for j in elite.into_iter().flatten() {
        out[j] = f[j];
    }
    out
}

pub fn novelty_competition(d: &Matrix, k: usize) -> Vec<f64> {
    novelty_scores(&pairwise_distances(d), k)
}

pub fn dominated_novelty_competition(f: &[f64], d: &Matrix, k: usize) -> Vec<f64> {
    dominated_novelty_scores(f, &pairwise_distances(d), k)
}

/// Dispatch over competition kinds. Invalid rows are removed before the rule
/// runs and always come back as -∞.
pub fn compete(
    kind: &CompetitionFn,
    f: &[f64],
    d: &Matrix,
    valid: &[bool],
    rng: &mut Stream,
) -> Result<Vec<f64>> {
    if f.len() != d.rows() || f.len() != valid.len() {
        return Err(Error::Dimension(format!(
            "competition inputs disagree: {} fitness, {} descriptors, {} flags",
            f.len(),
            d.rows(),
            valid.len()
        )));
    }
    kind.validate(d.cols())?;
    let idx: Vec<usize> = (0..f.len()).filter(|&i| valid[i]).collect();
    let all_valid = idx.len() == f.len();
    let (fv, dv) = if all_valid {
        (f.to_vec(), d.clone())
    } else {
        (idx.iter().map(|&i| f[i]).collect(), d.select_rows(&idx))
    };

    let scores = match kind {
        CompetitionFn::Identity => identity_competition(&fv),
        CompetitionFn::Random => random_competition(fv.len(), rng),
        CompetitionFn::MapElites(c) => map_elites_competition(&fv, &dv, c),
        CompetitionFn::Novelty { k } => novelty_competition(&dv, *k),
        CompetitionFn::DominatedNovelty { k } => dominated_novelty_competition(&fv, &dv, *k),
        CompetitionFn::Learned(model) => {
            if fv.is_empty() {
                Vec::new()
            } else {
                model.forward_competition(&fv, &dv)?
            }
        }
    };

    if all_valid {
        return Ok(scores);
    }
    let mut out = vec![f64::NEG_INFINITY; f.len()];
    for (s, i) in scores.into_iter().zip(idx) {
        out[i] = s;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn identity_cases() {
        assert_eq!(identity_competition(&[1.0, 2.0, 3.0]), vec![1.0, 2.0, 3.0]);
        assert!(identity_competition(&[]).is_empty());
        assert_eq!(
            identity_competition(&[f64::NEG_INFINITY, 5.0]),
            vec![f64::NEG_INFINITY, 5.0]
        );
    }

    #[test]
    fn random_cases() {
        let a = random_competition(10, &mut stream(1));
        assert_eq!(a, random_competition(10, &mut stream(1)));
        assert_ne!(a, random_competition(10, &mut stream(2)));
        assert!(a.iter().all(|v| (0.0..1.0).contains(v)));
    }

    #[test]
    fn map_elites_hand_example() {
        let c = CentroidSet {
            centroids: m(&[&[0.0, 0.0], &[1.0, 1.0]]),
            seed: 0,
        };
        let d = m(&[&[0.1, 0.0], &[0.0, 0.2], &[0.9, 1.0]]);
        let out = map_elites_competition(&[5.0, 7.0, 1.0], &d, &c);
        assert_eq!(out, vec![f64::NEG_INFINITY, 7.0, 1.0]);
        // sole occupant
        assert_eq!(map_elites_competition(&[3.0], &m(&[&[0.4, 0.4]]), &c), vec![3.0]);
        // distinct cells
        let d2 = m(&[&[0.0, 0.1], &[1.0, 0.9]]);
        assert_eq!(map_elites_competition(&[2.0, -4.0], &d2, &c), vec![2.0, -4.0]);
        // equal fitness in one cell keeps the lower index
        let d3 = m(&[&[0.0, 0.1], &[0.1, 0.0]]);
        assert_eq!(
            map_elites_competition(&[2.0, 2.0], &d3, &c),
            vec![2.0, f64::NEG_INFINITY]
        );
    }

    #[test]
    fn novelty_hand_examples() {
        let d = m(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let out = novelty_competition(&d, 2);
        let r = (1.0 + 2f64.sqrt()) / 2.0;
        assert_eq!(out[0], 1.0);
        assert!((out[1] - r).abs() < 1e-15 && (out[2] - r).abs() < 1e-15);
        assert_eq!(novelty_competition(&m(&[&[0.0], &[2.0]]), 1), vec![2.0, 2.0]);
        assert_eq!(novelty_competition(&m(&[&[1.0], &[1.0]]), 1), vec![0.0, 0.0]);
        assert_eq!(novelty_competition(&m(&[&[1.0]]), 3), vec![f64::INFINITY]);
    }

    #[test]
    fn dominated_novelty_hand_examples() {
        let d = m(&[&[0.0], &[1.0], &[2.0]]);
        assert_eq!(
            dominated_novelty_competition(&[3.0, 1.0, 2.0], &d, 1),
            vec![f64::INFINITY, 1.0, 2.0]
        );
        assert_eq!(
            dominated_novelty_competition(&[1.0, 1.0, 1.0], &d, 1),
            vec![f64::INFINITY; 3]
        );
        assert_eq!(
            dominated_novelty_competition(&[1.0], &m(&[&[0.0]]), 2),
            vec![f64::INFINITY]
        );
    }

    #[test]
    fn compete_masks_invalid_rows() {
        let d = m(&[&[0.0], &[1.0], &[5.0]]);
        let valid = [true, false, true];
        let mut rng = stream(0);
        for kind in [
            CompetitionFn::Identity,
            CompetitionFn::Random,
            CompetitionFn::Novelty { k: 1 },
            CompetitionFn::DominatedNovelty { k: 1 },
        ] {
            let out = compete(&kind, &[1.0, 100.0, 2.0], &d, &valid, &mut rng).unwrap();
            assert_eq!(out[1], f64::NEG_INFINITY, "{}", kind.name());
            assert!(out[0] > out[1] && out[2] > out[1]);
        }
        // the invalid row takes no part in distances
        let out = compete(
            &CompetitionFn::Novelty { k: 1 },
            &[1.0, 100.0, 2.0],
            &d,
            &valid,
            &mut rng,
        )
        .unwrap();
        assert_eq!(out[0], 5.0);
    }

    #[test]
    fn compete_rejects_bad_config() {
        let d = m(&[&[0.0]]);
        let mut rng = stream(0);
        assert!(compete(&CompetitionFn::Novelty { k: 0 }, &[1.0], &d, &[true], &mut rng).is_err());
        assert!(compete(&CompetitionFn::Identity, &[1.0, 2.0], &d, &[true], &mut rng).is_err());
    }
}
