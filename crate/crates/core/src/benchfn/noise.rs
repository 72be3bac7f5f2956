use rand::Rng;
use rand_distr::{Cauchy, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Stream;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    #[default]
    None,
    Uniform,
    Gaussian,
    Cauchy,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub strength: f64,
    /// Cauchy perturbations are clamped to `cauchy_cap * strength * (1 + |raw|)`.
    pub cauchy_cap: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            kind: NoiseKind::None,
            strength: 0.0,
            cauchy_cap: 10.0,
        }
    }
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, strength: f64) -> Self {
        Self {
            kind,
            strength,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strength >= 0.0 && self.strength.is_finite()) {
            return Err(Error::config(
                "noise.strength",
                "must be a finite non-negative number",
            ));
        }
        if !(self.cauchy_cap > 0.0 && self.cauchy_cap.is_finite()) {
            return Err(Error::config("noise.cauchy_cap", "must be positive"));
        }
        Ok(())
    }
}

/// Perturb a raw (minimization-form, optimum-relative) objective value.
///
/// * `uniform`: multiplies by a factor drawn from `1 + strength * U(-1, 1)`.
/// * `gaussian`: adds `strength * |raw| * N(0, 1)`.
/// * `cauchy`: adds `strength * (1 + |raw|) * Cauchy(0, 1)`, clamped.
pub fn apply_noise(raw: f64, noise: &NoiseSpec, rng: &mut Stream) -> f64 {
    match noise.kind {
        NoiseKind::None => raw,
        NoiseKind::Uniform => raw * (1.0 + noise.strength * rng.gen_range(-1.0..1.0)),
        NoiseKind::Gaussian => {
            let g: f64 = rng.sample(StandardNormal);
            raw + noise.strength * raw.abs() * g
        }
        NoiseKind::Cauchy => {
            let c: f64 = Cauchy::new(0.0, 1.0).expect("unit cauchy").sample(rng);
            let scale = noise.strength * (1.0 + raw.abs());
            let cap = noise.cauchy_cap * scale;
            raw + (scale * c).clamp(-cap, cap)
        }
    }
}
