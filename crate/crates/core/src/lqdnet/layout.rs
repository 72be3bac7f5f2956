//! Flat parameter layout of the learned competition network.
//!
//! Version 1 layout, in order (matrices are row-major `in × out`):
//!
//! ```text
//! embed.w        (D+1) × dm
//! embed.b        dm
//! per layer l = 0..L:
//!   norm1.gain   dm
//!   norm1.bias   dm
//!   w_q          dm × dm
//!   w_k          dm × dm
//!   w_v          dm × dm
//!   w_o          dm × dm
//!   b_o          dm
//!   norm2.gain   dm
//!   norm2.bias   dm
//!   mlp.w1       dm × hidden
//!   mlp.b1       hidden
//!   mlp.w2       hidden × dm
//!   mlp.b2       dm
//! head.w         dm
//! head.b         1
//! ```
//!
//! The last transformer layer feeds the per-row scalar head directly, so the
//! head reads `dm` features (not `D`).

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub const LAYOUT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetConfig {
    pub layers: usize,
    pub d_model: usize,
    pub heads: usize,
    pub mlp_hidden: usize,
}

impl Default for NetConfig {
    fn default() -> Self {
        Self {
            layers: 4,
            d_model: 16,
            heads: 4,
            mlp_hidden: 16,
        }
    }
}

impl NetConfig {
    pub fn head_dim(&self) -> usize {
        self.d_model / self.heads
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_model == 0 || self.heads == 0 || self.mlp_hidden == 0 {
            return Err(Error::config("net", "d_model, heads and mlp_hidden must be positive"));
        }
        if !self.d_model.is_multiple_of(self.heads) {
            return Err(Error::config(
                "net.heads",
                format!("d_model {} not divisible by heads {}", self.d_model, self.heads),
            ));
        }
        Ok(())
    }

    fn layer_len(&self) -> usize {
        let dm = self.d_model;
        let h = self.mlp_hidden;
        4 * dm + 4 * dm * dm + dm + dm * h + h + h * dm + dm
    }

    /// Total number of parameters for descriptor dimension `descriptor_dim`.
    pub fn param_count(&self, descriptor_dim: usize) -> usize {
        let dm = self.d_model;
        (descriptor_dim + 1) * dm + dm + self.layers * self.layer_len() + dm + 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerWeights {
    pub norm1_gain: Vec<f64>,
    pub norm1_bias: Vec<f64>,
    pub w_q: Vec<f64>,
    pub w_k: Vec<f64>,
    pub w_v: Vec<f64>,
    pub w_o: Vec<f64>,
    pub b_o: Vec<f64>,
    pub norm2_gain: Vec<f64>,
    pub norm2_bias: Vec<f64>,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl LayerWeights {
    fn fields(&self) -> [&Vec<f64>; 13] {
        [
            &self.norm1_gain,
            &self.norm1_bias,
            &self.w_q,
            &self.w_k,
            &self.w_v,
            &self.w_o,
            &self.b_o,
            &self.norm2_gain,
            &self.norm2_bias,
            &self.w1,
            &self.b1,
            &self.w2,
            &self.b2,
        ]
    }
}

/// Flat parameter vector plus the metadata needed to interpret it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LqdParams {
    pub layout_version: u32,
    pub descriptor_dim: usize,
    pub config: NetConfig,
    pub theta: Vec<f64>,
}

impl LqdParams {
    pub fn new(config: NetConfig, descriptor_dim: usize, theta: Vec<f64>) -> Result<Self> {
        config.validate()?;
        let expected = config.param_count(descriptor_dim);
        if theta.len() != expected {
            return Err(Error::config(
                "theta",
                format!(
                    "parameter vector has length {}, layout for D={descriptor_dim} needs {expected}",
                    theta.len()
                ),
            ));
        }
        Ok(Self {
            layout_version: LAYOUT_VERSION,
            descriptor_dim,
            config,
            theta,
        })
    }

    pub fn zeros(config: NetConfig, descriptor_dim: usize) -> Self {
        let n = config.param_count(descriptor_dim);
        Self {
            layout_version: LAYOUT_VERSION,
            descriptor_dim,
            config,
            theta: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// Structured view of the parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub embed_w: Vec<f64>,
    pub embed_b: Vec<f64>,
    pub layers: Vec<LayerWeights>,
    pub head_w: Vec<f64>,
    pub head_b: f64,
}

pub fn unflatten(params: &LqdParams) -> Result<Weights> {
    if params.layout_version != LAYOUT_VERSION {
        return Err(Error::config(
            "layout_version",
            format!(
                "unsupported parameter layout {} (expected {LAYOUT_VERSION})",
                params.layout_version
            ),
        ));
    }
    let cfg = params.config;
    cfg.validate()?;
    if params.theta.len() != cfg.param_count(params.descriptor_dim) {
        return Err(Error::config("theta", "parameter vector length does not match layout"));
    }
    let dm = cfg.d_model;
    let h = cfg.mlp_hidden;
    let mut rest: &[f64] = &params.theta;
    let mut take = |n: usize| {
        let (a, b) = rest.split_at(n);
        rest = b;
        a.to_vec()
    };
    let embed_w = take((params.descriptor_dim + 1) * dm);
    let embed_b = take(dm);
    let layers = (0..cfg.layers)
        .map(|_| LayerWeights {
            norm1_gain: take(dm),
            norm1_bias: take(dm),
            w_q: take(dm * dm),
            w_k: take(dm * dm),
            w_v: take(dm * dm),
            w_o: take(dm * dm),
            b_o: take(dm),
            norm2_gain: take(dm),
            norm2_bias: take(dm),
            w1: take(dm * h),
            b1: take(h),
            w2: take(h * dm),
            b2: take(dm),
        })
        .collect();
    let head_w = take(dm);
    let head_b = take(1)[0];
    Ok(Weights {
        embed_w,
        embed_b,
        layers,
        head_w,
        head_b,
    })
}

pub fn flatten(w: &Weights) -> Vec<f64> {
    let mut out = Vec::new();
    out.extend_from_slice(&w.embed_w);
    out.extend_from_slice(&w.embed_b);
    for l in &w.layers {
        for field in l.fields() {
            out.extend_from_slice(field);
        }
    }
    out.extend_from_slice(&w.head_w);
    out.push(w.head_b);
    out
}

/// Scaled-normal initialization: weight matrices ~ N(0, 1/fan_in), biases 0,
/// normalization gains 1.
pub fn init_params(config: NetConfig, descriptor_dim: usize, seed: u64) -> Result<LqdParams> {
    config.validate()?;
    let mut rng = rng::stream_at(seed, &[rng::tag::NET_INIT]);
    let dm = config.d_model;
    let h = config.mlp_hidden;
    let mut normal = |n: usize, fan_in: usize| -> Vec<f64> {
        let s = 1.0 / (fan_in as f64).sqrt();
        (0..n).map(|_| s * rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let in_dim = descriptor_dim + 1;
    let embed_w = normal(in_dim * dm, in_dim);
    let layers = (0..config.layers)
        .map(|_| LayerWeights {
            norm1_gain: vec![1.0; dm],
            norm1_bias: vec![0.0; dm],
            w_q: normal(dm * dm, dm),
            w_k: normal(dm * dm, dm),
            w_v: normal(dm * dm, dm),
            w_o: normal(dm * dm, dm),
            b_o: vec![0.0; dm],
            norm2_gain: vec![1.0; dm],
            norm2_bias: vec![0.0; dm],
            w1: normal(dm * h, dm),
            b1: vec![0.0; h],
            w2: normal(h * dm, h),
            b2: vec![0.0; dm],
        })
        .collect();
    let head_w = normal(dm, dm);
    let w = Weights {
        embed_w,
        embed_b: vec![0.0; dm],
        layers,
        head_w,
        head_b: 0.0,
    };
    LqdParams::new(config, descriptor_dim, flatten(&w))
}

/// Parameters whose forward pass returns the standardized fitness column
/// unchanged: the embedding copies z₀ into feature 0, every residual branch is
/// zero and the head reads feature 0. Selection under these parameters is
/// selection by raw fitness.
pub fn identity_params(config: NetConfig, descriptor_dim: usize) -> Result<LqdParams> {
    config.validate()?;
    let mut p = LqdParams::zeros(config, descriptor_dim);
    let mut w = unflatten(&p)?;
    w.embed_w[0] = 1.0;
    for l in &mut w.layers {
        l.norm1_gain.iter_mut().for_each(|g| *g = 1.0);
        l.norm2_gain.iter_mut().for_each(|g| *g = 1.0);
    }
    w.head_w[0] = 1.0;
    p.theta = flatten(&w);
    Ok(p)
}
