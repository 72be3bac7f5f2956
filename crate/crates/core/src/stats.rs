//! Rank statistics for comparing replicated runs: Wilcoxon–Mann–Whitney U
//! and Holm–Bonferroni adjustment.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest group size for which the exact null distribution is enumerated.
pub const EXACT_MAX_N: usize = 12;

/// 1-based ranks with ties sharing the mean of their positions.
pub fn midranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            ranks[t] = r;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    TwoSided,
    /// First sample tends to be larger.
    Greater,
    /// First sample tends to be smaller.
    Less,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UTest {
    /// U statistic of the first sample.
    pub u: f64,
    pub p: f64,
    pub exact: bool,
}

pub fn mann_whitney(a: &[f64], b: &[f64], alt: Alternative) -> Result<UTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Input("both samples must be non-empty".into()));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Input("samples contain NaN".into()));
    }
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let ra: f64 = ranks[..na].iter().sum();
    let u = ra - (na * (na + 1)) as f64 / 2.0;
    if na <= EXACT_MAX_N && nb <= EXACT_MAX_N {
        let p = exact_p(&ranks, na, ra, alt);
        return Ok(UTest { u, p, exact: true });
    }
    Ok(UTest {
        u,
        p: normal_p(&pooled, na, nb, u, alt),
        exact: false,
    })
}

/// Enumerate every way to pick `na` of the pooled (mid)ranks; doubled ranks
/// are integers even with ties.
fn exact_p(ranks: &[f64], na: usize, ra: f64, alt: Alternative) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[c][s]: subsets of size c with doubled rank sum s
    let mut ways = vec![vec![0.0f64; max_sum + 1]; na + 1];
    ways[0][0] = 1.0;
    for &r in &doubled {
        for c in (1..=na).rev() {
            let (lo, hi) = ways.split_at_mut(c);
            for s in (r..=max_sum).rev() {
                hi[0][s] += lo[c - 1][s - r];
            }
        }
    }
    let obs = (2.0 * ra).round() as usize;
    let total: f64 = ways[na].iter().sum();
    let upper: f64 = ways[na][obs..].iter().sum::<f64>() / total;
    let lower: f64 = ways[na][..=obs].iter().sum::<f64>() / total;
    match alt {
        Alternative::Greater => upper,
        Alternative::Less => lower,
        Alternative::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    }
}

/// Normal approximation with tie-corrected variance and continuity correction.
fn normal_p(pooled: &[f64], na: usize, nb: usize, u: f64, alt: Alternative) -> f64 {
    let n = (na + nb) as f64;
    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        ties += t * t * t - t;
        i = j + 1;
    }
    let (naf, nbf) = (na as f64, nb as f64);
    let mean = naf * nbf / 2.0;
    let var = naf * nbf / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let sd = var.sqrt();
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let upper = 1.0 - std_normal.cdf((u - mean - 0.5) / sd);
    let lower = std_normal.cdf((u - mean + 0.5) / sd);
    match alt {
        Alternative::Greater => upper.min(1.0),
        Alternative::Less => lower.min(1.0),
        Alternative::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    }
}

/// Holm–Bonferroni step-down adjusted p-values, in input order.
pub fn holm(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let mut adj = vec![0.0; m];
    let mut running: f64 = 0.0;
    for (rank, &i) in idx.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p[i]).min(1.0));
        adj[i] = running;
    }
    adj
}

pub fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_with_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn smallest_two_sided_p_at_three_each() {
        let t = mann_whitney(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0], Alternative::TwoSided).unwrap();
        assert!(t.exact);
        assert_eq!(t.u, 0.0);
        assert!((t.p - 0.1).abs() < 1e-12);
        let g = mann_whitney(&[10.0, 20.0, 30.0], &[1.0, 2.0, 3.0], Alternative::Greater).unwrap();
        assert!((g.p - 0.05).abs() < 1e-12);
    }

    #[test]
    fn identical_samples_not_significant() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mann_whitney(&a, &a, Alternative::TwoSided).unwrap().p, 1.0);
        let big: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert!(mann_whitney(&big, &big, Alternative::TwoSided).unwrap().p > 0.9);
        let same = vec![5.0; 15];
        assert_eq!(mann_whitney(&same, &same, Alternative::TwoSided).unwrap().p, 1.0);
    }

    #[test]
    fn normal_branch_detects_shift() {
        let a: Vec<f64> = (0..16).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..16).map(|i| i as f64 + 20.0).collect();
        let t = mann_whitney(&a, &b, Alternative::Less).unwrap();
        assert!(!t.exact);
        assert!(t.p < 1e-5);
    }

    #[test]
    fn holm_is_monotone_and_dominates_raw() {
        let p = [0.01, 0.04, 0.03, 0.5];
        let h = holm(&p);
        assert!((h[0] - 0.04).abs() < 1e-15);
        assert!((h[2] - 0.09).abs() < 1e-15);
        assert!((h[1] - 0.09).abs() < 1e-15);
        assert_eq!(h[3], 0.5);
        for (a, b) in h.iter().zip(&p) {
            assert!(a >= b);
        }
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
