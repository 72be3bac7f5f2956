//! Separable CMA-ES (diagonal covariance), maximizing.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Stream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SepCmaState {
    pub mean: Vec<f64>,
    pub sigma: f64,
    /// Per-coordinate variances.
    pub c: Vec<f64>,
    pub p_sigma: Vec<f64>,
    pub p_c: Vec<f64>,
    pub generation: u64,
    pub lambda: usize,
    /// Recombination weights over the best `weights.len()` candidates.
    pub weights: Vec<f64>,
    pub mu_eff: f64,
    pub c_sigma: f64,
    pub d_sigma: f64,
    pub c_c: f64,
    pub c1: f64,
    pub c_mu: f64,
    pub chi_n: f64,
    /// NaN fitness values seen by the most recent `cma_tell`.
    pub last_nan_count: usize,
}

impl SepCmaState {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 || self.c.len() != n || self.p_sigma.len() != n || self.p_c.len() != n {
            return Err(Error::State("inconsistent Sep-CMA-ES vectors".into()));
        }
        if !(self.sigma > 0.0) || self.c.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::State("step size and variances must be positive".into()));
        }
        Ok(())
    }
}

/// Fresh state around `mean` with `lambda` candidates per generation.
pub fn cma_init(mean: Vec<f64>, lambda: usize, sigma0: f64) -> Result<SepCmaState> {
    let n = mean.len();
    if n == 0 {
        return Err(Error::Dimension("search space must have at least one dimension".into()));
    }
    if lambda < 2 {
        return Err(Error::config("meta.population", "must be >= 2"));
    }
    if !(sigma0 > 0.0 && sigma0.is_finite()) {
        return Err(Error::config("meta.sigma0", "must be finite and > 0"));
    }
    if mean.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("initial mean must be finite".into()));
    }
    let nf = n as f64;
    let mu = lambda / 2;
    let raw: Vec<f64> = (1..=mu)
        .map(|i| (mu as f64 + 0.5).ln() - (i as f64).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

    let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
    let d_sigma = 1.0 + 2.0 * (((mu_eff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
    let c_c = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
    // diagonal-only learning rates are scaled up by (n + 2) / 3
    let sep = (nf + 2.0) / 3.0;
    let c1 = (sep * 2.0 / ((nf + 1.3).powi(2) + mu_eff)).min(1.0);
    let c_mu_full = 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0).powi(2) + mu_eff);
    let c_mu = (sep * c_mu_full).min(1.0 - c1).max(0.0);
    let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));

    Ok(SepCmaState {
        mean,
        sigma: sigma0,
        c: vec![1.0; n],
        p_sigma: vec![0.0; n],
        p_c: vec![0.0; n],
        generation: 0,
        lambda,
        weights,
        mu_eff,
        c_sigma,
        d_sigma,
        c_c,
        c1,
        c_mu,
        chi_n,
        last_nan_count: 0,
    })
}

/// `lambda` candidates `mean + sigma·sqrt(c)⊙z`, z standard normal.
pub fn cma_ask(state: &SepCmaState, rng: &mut Stream) -> Result<Vec<Vec<f64>>> {
    state.check()?;
    let sd: Vec<f64> = state.c.iter().map(|c| state.sigma * c.sqrt()).collect();
    Ok((0..state.lambda)
        .map(|_| {
            state
                .mean
                .iter()
                .zip(&sd)
                .map(|(m, s)| m + s * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect())
}

/// Update from candidates and their fitness (higher is better). NaN fitness
/// ranks below everything else.
pub fn cma_tell(state: &SepCmaState, candidates: &[Vec<f64>], fitness: &[f64]) -> Result<SepCmaState> {
    state.check()?;
    if candidates.len() != state.lambda || fitness.len() != state.lambda {
        return Err(Error::Dimension(format!(
            "expected {} candidates and fitness values, got {} and {}",
            state.lambda,
            candidates.len(),
            fitness.len()
        )));
    }
    let n = state.dim();
    if candidates.iter().any(|c| c.len() != n) {
        return Err(Error::Dimension("candidate length differs from mean".into()));
    }
    let mut s = state.clone();
    s.last_nan_count = fitness.iter().filter(|f| f.is_nan()).count();

    let key = |v: f64| if v.is_nan() { f64::NEG_INFINITY } else { v };
    let mut order: Vec<usize> = (0..s.lambda).collect();
    order.sort_by(|&a, &b| key(fitness[b]).partial_cmp(&key(fitness[a])).expect("NaN mapped away"));

    // steps in units of sigma
    let ys: Vec<Vec<f64>> = order[..s.weights.len()]
        .iter()
        .map(|&i| {
            candidates[i]
                .iter()
                .zip(&s.mean)
                .map(|(x, m)| (x - m) / s.sigma)
                .collect()
        })
        .collect();
    let mut y_w = vec![0.0; n];
    for (w, y) in s.weights.iter().zip(&ys) {
        for (a, b) in y_w.iter_mut().zip(y) {
            *a += w * b;
        }
    }
    for (m, y) in s.mean.iter_mut().zip(&y_w) {
        *m += s.sigma * y;
    }

    let cs = (s.c_sigma * (2.0 - s.c_sigma) * s.mu_eff).sqrt();
    for j in 0..n {
        s.p_sigma[j] = (1.0 - s.c_sigma) * s.p_sigma[j] + cs * y_w[j] / s.c[j].sqrt();
    }
    let ps_norm = s.p_sigma.iter().map(|v| v * v).sum::<f64>().sqrt();
    let g = s.generation + 1;
    let denom = (1.0 - (1.0 - s.c_sigma).powf(2.0 * g as f64)).sqrt();
    let h_sigma = if ps_norm / denom < (1.4 + 2.0 / (n as f64 + 1.0)) * s.chi_n {
        1.0
    } else {
        0.0
    };
    let cc = (s.c_c * (2.0 - s.c_c) * s.mu_eff).sqrt();
    for j in 0..n {
        s.p_c[j] = (1.0 - s.c_c) * s.p_c[j] + h_sigma * cc * y_w[j];
    }

    let decay = 1.0 - s.c1 - s.c_mu + (1.0 - h_sigma) * s.c1 * s.c_c * (2.0 - s.c_c);
    for j in 0..n {
        let rank_mu: f64 = s.weights.iter().zip(&ys).map(|(w, y)| w * y[j] * y[j]).sum();
        let v = decay * s.c[j] + s.c1 * s.p_c[j] * s.p_c[j] + s.c_mu * rank_mu;
        s.c[j] = v.max(f64::MIN_POSITIVE);
    }

    s.sigma *= ((s.c_sigma / s.d_sigma) * (ps_norm / s.chi_n - 1.0)).exp();
    s.sigma = s.sigma.clamp(f64::MIN_POSITIVE, 1e300);
    s.generation = g;
    Ok(s)
}
