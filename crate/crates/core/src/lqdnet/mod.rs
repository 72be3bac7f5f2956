//! Learned competition function: featurize → embed → transformer → scalar
//! projection. The network is permutation equivariant over population rows and
//! has no parameter that depends on the population size.

mod fastmath;
mod layout;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use layout::{
    flatten, identity_params, init_params, unflatten, LayerWeights, LqdParams, NetConfig, Weights,
    LAYOUT_VERSION,
};

pub const FEATURE_EPS: f64 = 1e-8;
const NORM_EPS: f64 = 1e-5;

/// Standardize `[f | d]` column-wise across the population.
///
/// Non-finite fitness entries are first replaced by `min_finite - 3·std_finite`
/// so that eliminated rows read as very poor rather than as NaN.
pub fn featurize(f: &[f64], d: &Matrix) -> Matrix {
    let n = f.len();
    let cols = d.cols() + 1;
    let mut z = Matrix::zeros(n, cols);
    if n == 0 {
        return z;
    }

    let finite: Vec<f64> = f.iter().copied().filter(|v| v.is_finite()).collect();
    let fill = if finite.is_empty() {
        0.0
    } else {
        let (_, s) = crate::matrix::mean_std(&finite);
        finite.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * s
    };
    for (i, &v) in f.iter().enumerate() {
        z[(i, 0)] = if v.is_finite() { v } else { fill };
    }
    for i in 0..n {
        z.row_mut(i)[1..].copy_from_slice(d.row(i));
    }

    let inv_n = 1.0 / n as f64;
    for c in 0..cols {
        let mean = (0..n).map(|i| z[(i, c)]).sum::<f64>() * inv_n;
        let var = (0..n).map(|i| (z[(i, c)] - mean).powi(2)).sum::<f64>() * inv_n;
        let std = var.sqrt();
        let std = if std < FEATURE_EPS { FEATURE_EPS } else { std };
        for i in 0..n {
            z[(i, c)] = (z[(i, c)] - mean) / std;
        }
    }
    z
}

/// out[n×b] = x[n×a] · w[a×b] (+ bias)
#[inline(always)]
fn affine(x: &[f64], n: usize, a: usize, w: &[f64], b: usize, bias: Option<&[f64]>, out: &mut [f64]) {
    debug_assert_eq!(x.len(), n * a);
    debug_assert_eq!(w.len(), a * b);
    if b == 16 {
        return affine_fixed::<16>(x, n, a, w, bias, out);
    }
    for i in 0..n {
        let orow = &mut out[i * b..(i + 1) * b];
        match bias {
            Some(bv) => orow.copy_from_slice(bv),
            None => orow.iter_mut().for_each(|v| *v = 0.0),
        }
        let xrow = &x[i * a..(i + 1) * a];
        for (k, &xv) in xrow.iter().enumerate() {
            let wrow = &w[k * b..(k + 1) * b];
            for (o, &wv) in orow.iter_mut().zip(wrow) {
                *o += xv * wv;
            }
        }
    }
}

/// `affine` with the output width fixed so the accumulator stays in registers.
#[inline(always)]
fn affine_fixed<const B: usize>(
    x: &[f64],
    n: usize,
    a: usize,
    w: &[f64],
    bias: Option<&[f64]>,
    out: &mut [f64],
) {
    let w = &w[..a * B];
    for i in 0..n {
        let mut acc = [0.0f64; B];
        if let Some(bv) = bias {
            acc.copy_from_slice(&bv[..B]);
        }
        for (&xv, wrow) in x[i * a..(i + 1) * a].iter().zip(w.chunks_exact(B)) {
            let wrow: &[f64; B] = wrow.try_into().unwrap();
            for t in 0..B {
                acc[t] += xv * wrow[t];
            }
        }
        out[i * B..(i + 1) * B].copy_from_slice(&acc);
    }
}

/// Per-row normalization over the feature axis.
#[inline(always)]
fn layer_norm(x: &[f64], n: usize, dm: usize, gain: &[f64], bias: &[f64], out: &mut [f64]) {
    let inv = 1.0 / dm as f64;
    for i in 0..n {
        let row = &x[i * dm..(i + 1) * dm];
        let mean = row.iter().sum::<f64>() * inv;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() * inv;
        let r = 1.0 / (var + NORM_EPS).sqrt();
        for (j, o) in out[i * dm..(i + 1) * dm].iter_mut().enumerate() {
            *o = (row[j] - mean) * r * gain[j] + bias[j];
        }
    }
}

#[inline(always)]
fn gelu(x: f64) -> f64 {
    const C: f64 = 0.797_884_560_802_865_4; // sqrt(2/π)
    0.5 * x * (1.0 + fastmath::tanh(C * (x + 0.044_715 * x * x * x)))
}

/// Multi-head scaled dot-product attention of already-normalized rows `h`,
/// before the output projection. Returns an `n × dm` matrix.
pub fn multi_head_attention(h: &Matrix, layer: &LayerWeights, cfg: &NetConfig) -> Matrix {
    let n = h.rows();
    let dm = cfg.d_model;
    let mut q = vec![0.0; n * dm];
    let mut k = vec![0.0; n * dm];
    let mut v = vec![0.0; n * dm];
    affine(h.as_slice(), n, dm, &layer.w_q, dm, None, &mut q);
    affine(h.as_slice(), n, dm, &layer.w_k, dm, None, &mut k);
    affine(h.as_slice(), n, dm, &layer.w_v, dm, None, &mut v);
    let mut out = vec![0.0; n * dm];
    attend(&q, &k, &v, n, cfg, &mut out);
    Matrix::from_vec(n, dm, out)
}

fn attend(q: &[f64], k: &[f64], v: &[f64], n: usize, cfg: &NetConfig, out: &mut [f64]) {
    let mut kt = vec![0.0; n * cfg.head_dim()];
    let mut scores = vec![0.0; n];
    attend_with(q, k, v, n, cfg, out, &mut kt, &mut scores);
}

/// Attention with caller-provided buffers: `kt` holds one head's keys
/// transposed and pre-scaled (`head_dim × n`), `scores` one row of logits.
#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn attend_with(
    q: &[f64],
    k: &[f64],
    v: &[f64],
    n: usize,
    cfg: &NetConfig,
    out: &mut [f64],
    kt: &mut [f64],
    scores: &mut [f64],
) {
    let hd = cfg.head_dim();
    if hd == 4 {
        attend_heads::<4>(q, k, v, n, cfg, out, kt, scores);
    } else {
        attend_generic(q, k, v, n, cfg, out, kt, scores);
    }
}

#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn attend_generic(
    q: &[f64],
    k: &[f64],
    v: &[f64],
    n: usize,
    cfg: &NetConfig,
    out: &mut [f64],
    kt: &mut [f64],
    scores: &mut [f64],
) {
    let dm = cfg.d_model;
    let hd = cfg.head_dim();
    let scale = 1.0 / (hd as f64).sqrt();
    let scores = &mut scores[..n];
    for head in 0..cfg.heads {
        let off = head * hd;
        for j in 0..n {
            for t in 0..hd {
                kt[t * n + j] = k[j * dm + off + t] * scale;
            }
        }
        for i in 0..n {
            scores.iter_mut().for_each(|s| *s = 0.0);
            for t in 0..hd {
                let qv = q[i * dm + off + t];
                for (s, &kv) in scores.iter_mut().zip(&kt[t * n..(t + 1) * n]) {
                    *s += qv * kv;
                }
            }
            softmax_in_place(scores);
            let orow = &mut out[i * dm + off..i * dm + off + hd];
            orow.iter_mut().for_each(|o| *o = 0.0);
            for (j, &w) in scores.iter().enumerate() {
                let vj = &v[j * dm + off..j * dm + off + hd];
                for (o, &vv) in orow.iter_mut().zip(vj) {
                    *o += w * vv;
                }
            }
        }
    }
}

/// Same arithmetic as `attend_generic`, in the same per-row order, with the
/// head width fixed at compile time and `R` query rows interleaved so their
/// reductions overlap.
#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn attend_heads<const H: usize>(
    q: &[f64],
    k: &[f64],
    v: &[f64],
    n: usize,
    cfg: &NetConfig,
    out: &mut [f64],
    kt: &mut [f64],
    _scores: &mut [f64],
) {
    const R: usize = 4;
    let dm = cfg.d_model;
    let scale = 1.0 / (H as f64).sqrt();
    let mut vh = vec![[0.0f64; H]; n];
    let mut sc = vec![0.0f64; R * n];
    for head in 0..cfg.heads {
        let off = head * H;
        for j in 0..n {
            let kj = &k[j * dm + off..j * dm + off + H];
            for t in 0..H {
                kt[t * n + j] = kj[t] * scale;
            }
            vh[j].copy_from_slice(&v[j * dm + off..j * dm + off + H]);
        }
        let mut i0 = 0;
        while i0 < n {
            let rows = R.min(n - i0);
            for r in 0..rows {
                let i = i0 + r;
                let srow = &mut sc[r * n..(r + 1) * n];
                srow.iter_mut().for_each(|s| *s = 0.0);
                for t in 0..H {
                    let qv = q[i * dm + off + t];
                    for (s, &kv) in srow.iter_mut().zip(&kt[t * n..(t + 1) * n]) {
                        *s += qv * kv;
                    }
                }
            }
            if rows == R {
                let mut max = [f64::NEG_INFINITY; R];
                for j in 0..n {
                    for r in 0..R {
                        max[r] = max[r].max(sc[r * n + j]);
                    }
                }
                for r in 0..R {
                    for s in &mut sc[r * n..(r + 1) * n] {
                        *s = fastmath::exp(*s - max[r]);
                    }
                }
                let mut total = [0.0f64; R];
                for j in 0..n {
                    for r in 0..R {
                        total[r] += sc[r * n + j];
                    }
                }
                let inv = total.map(|t| 1.0 / t);
                let mut acc = [[0.0f64; H]; R];
                for (j, vj) in vh.iter().enumerate() {
                    for r in 0..R {
                        let w = sc[r * n + j] * inv[r];
                        for t in 0..H {
                            acc[r][t] += w * vj[t];
                        }
                    }
                }
                for (r, a) in acc.iter().enumerate() {
                    let i = i0 + r;
                    out[i * dm + off..i * dm + off + H].copy_from_slice(a);
                }
            } else {
                for r in 0..rows {
                    let srow = &mut sc[r * n..(r + 1) * n];
                    softmax_in_place(srow);
                    let mut acc = [0.0f64; H];
                    for (&w, vj) in srow.iter().zip(&vh) {
                        for t in 0..H {
                            acc[t] += w * vj[t];
                        }
                    }
                    let i = i0 + r;
                    out[i * dm + off..i * dm + off + H].copy_from_slice(&acc);
                }
            }
            i0 += rows;
        }
    }
}

#[inline(always)]
fn softmax_in_place(s: &mut [f64]) {
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for v in s.iter_mut() {
        *v = fastmath::exp(*v - max);
    }
    let inv = 1.0 / s.iter().sum::<f64>();
    for v in s.iter_mut() {
        *v *= inv;
    }
}

/// One pre-normalization residual block:
/// `y ← y + W_o·MHA(norm₁(y)) + b_o`, then `y ← y + MLP(norm₂(y))`.
pub fn attention_block(y: &Matrix, layer: &LayerWeights, cfg: &NetConfig) -> Matrix {
    let mut out = y.clone();
    let mut scratch = Scratch::new(y.rows(), cfg);
    block_in_place(out.as_mut_slice(), y.rows(), layer, cfg, &mut scratch);
    out
}

struct Scratch {
    h: Vec<f64>,
    q: Vec<f64>,
    k: Vec<f64>,
    v: Vec<f64>,
    a: Vec<f64>,
    proj: Vec<f64>,
    hidden: Vec<f64>,
    kt: Vec<f64>,
    scores: Vec<f64>,
}

impl Scratch {
    fn new(n: usize, cfg: &NetConfig) -> Self {
        let dm = cfg.d_model;
        Self {
            h: vec![0.0; n * dm],
            q: vec![0.0; n * dm],
            k: vec![0.0; n * dm],
            v: vec![0.0; n * dm],
            a: vec![0.0; n * dm],
            proj: vec![0.0; n * dm],
            hidden: vec![0.0; n * cfg.mlp_hidden],
            kt: vec![0.0; n * cfg.head_dim()],
            scores: vec![0.0; n],
        }
    }
}

#[inline(always)]
fn block_in_place(y: &mut [f64], n: usize, l: &LayerWeights, cfg: &NetConfig, s: &mut Scratch) {
    let dm = cfg.d_model;
    let hid = cfg.mlp_hidden;
    layer_norm(y, n, dm, &l.norm1_gain, &l.norm1_bias, &mut s.h);
    affine(&s.h, n, dm, &l.w_q, dm, None, &mut s.q);
    affine(&s.h, n, dm, &l.w_k, dm, None, &mut s.k);
    affine(&s.h, n, dm, &l.w_v, dm, None, &mut s.v);
    attend_with(&s.q, &s.k, &s.v, n, cfg, &mut s.a, &mut s.kt, &mut s.scores);
    affine(&s.a, n, dm, &l.w_o, dm, Some(&l.b_o), &mut s.proj);
    for (yv, p) in y.iter_mut().zip(&s.proj) {
        *yv += p;
    }
    layer_norm(y, n, dm, &l.norm2_gain, &l.norm2_bias, &mut s.h);
    affine(&s.h, n, dm, &l.w1, hid, Some(&l.b1), &mut s.hidden);
    s.hidden.iter_mut().for_each(|v| *v = gelu(*v));
    affine(&s.hidden, n, hid, &l.w2, dm, Some(&l.b2), &mut s.proj);
    for (yv, p) in y.iter_mut().zip(&s.proj) {
        *yv += p;
    }
}

/// A parameter vector unpacked for evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct LqdModel {
    params: LqdParams,
    weights: Weights,
}

impl LqdModel {
    pub fn new(params: LqdParams) -> Result<Self> {
        let weights = unflatten(&params)?;
        Ok(Self { params, weights })
    }

    pub fn params(&self) -> &LqdParams {
        &self.params
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn config(&self) -> &NetConfig {
        &self.params.config
    }

    pub fn descriptor_dim(&self) -> usize {
        self.params.descriptor_dim
    }

    /// Competition fitness for every row of the population.
    pub fn forward_competition(&self, f: &[f64], d: &Matrix) -> Result<Vec<f64>> {
        if d.rows() != f.len() {
            return Err(Error::Dimension(format!(
                "{} fitness values but {} descriptor rows",
                f.len(),
                d.rows()
            )));
        }
        if d.cols() != self.descriptor_dim() {
            return Err(Error::config(
                "theta",
                format!(
                    "parameters expect D={}, descriptors have D={}",
                    self.descriptor_dim(),
                    d.cols()
                ),
            ));
        }
        #[cfg(target_arch = "x86_64")]
        if std::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports the enabled feature set
            return Ok(unsafe { self.forward_avx2(f, d) });
        }
        Ok(self.forward_unchecked(f, d))
    }

    /// Same arithmetic as `forward_unchecked` (no FMA contraction), compiled
    /// with wider vectors.
    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn forward_avx2(&self, f: &[f64], d: &Matrix) -> Vec<f64> {
        self.forward_unchecked(f, d)
    }

    #[inline(always)]
    fn forward_unchecked(&self, f: &[f64], d: &Matrix) -> Vec<f64> {
        let cfg = self.params.config;
        let n = f.len();
        let dm = cfg.d_model;
        let z = featurize(f, d);
        let mut y = vec![0.0; n * dm];
        affine(
            z.as_slice(),
            n,
            z.cols(),
            &self.weights.embed_w,
            dm,
            Some(&self.weights.embed_b),
            &mut y,
        );
        let mut scratch = Scratch::new(n, &cfg);
        for layer in &self.weights.layers {
            block_in_place(&mut y, n, layer, &cfg, &mut scratch);
        }
        (0..n)
            .map(|i| {
                let row = &y[i * dm..(i + 1) * dm];
                let mut acc = self.weights.head_b;
                for (a, w) in row.iter().zip(&self.weights.head_w) {
                    acc += a * w;
                }
                acc
            })
            .collect()
    }
}

pub fn forward_competition(params: &LqdParams, f: &[f64], d: &Matrix) -> Result<Vec<f64>> {
    LqdModel::new(params.clone())?.forward_competition(f, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn random_pop(n: usize, d: usize, seed: u64) -> (Vec<f64>, Matrix) {
        let mut rng = stream(seed);
        let f = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let data = (0..n * d).map(|_| rng.sample(StandardNormal)).collect();
        (f, Matrix::from_vec(n, d, data))
    }

    #[test]
    fn featurize_hand_example() {
        // mean 2, population std sqrt(2/3) ⇒ ±1/sqrt(2/3) = ±1.224744871...
        let z = featurize(&[1.0, 2.0, 3.0], &Matrix::zeros(3, 0));
        let e = 1.0 / (2.0f64 / 3.0).sqrt();
        assert!((z[(0, 0)] + e).abs() < 1e-12);
        assert!(z[(1, 0)].abs() < 1e-12);
        assert!((z[(2, 0)] - e).abs() < 1e-12);
        assert!((e - 1.2247).abs() < 1e-4);
    }

    #[test]
    fn featurize_constant_column_and_moments() {
        let d = Matrix::from_rows(&[vec![0.1, 4.0], vec![0.1, -1.0], vec![0.1, 2.5], vec![0.1, 0.0]]);
        let z = featurize(&[3.0, -2.0, 7.5, 1.0], &d);
        for i in 0..4 {
            assert!(z[(i, 1)].abs() < 1e-6);
        }
        for c in [0, 2] {
            let col: Vec<f64> = (0..4).map(|i| z[(i, c)]).collect();
            let (m, s) = crate::matrix::mean_std(&col);
            assert!(m.abs() < 1e-6 && (s - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn featurize_imputes_negative_infinity() {
        let z = featurize(&[1.0, f64::NEG_INFINITY, 3.0], &Matrix::zeros(3, 0));
        assert!(z.as_slice().iter().all(|v| v.is_finite()));
        assert!(z[(1, 0)] < z[(0, 0)] && z[(0, 0)] < z[(2, 0)]);
    }

    #[test]
    fn zero_query_key_gives_uniform_attention() {
        let cfg = NetConfig::default();
        let p = init_params(cfg, 2, 3).unwrap();
        let mut w = unflatten(&p).unwrap();
        let layer = &mut w.layers[0];
        layer.w_q.iter_mut().for_each(|v| *v = 0.0);
        layer.w_k.iter_mut().for_each(|v| *v = 0.0);
        let (_, h) = random_pop(7, cfg.d_model, 1);
        let a = multi_head_attention(&h, layer, &cfg);
        // expected: mean over rows of V = h W_v
        let mut v = vec![0.0; 7 * cfg.d_model];
        affine(h.as_slice(), 7, cfg.d_model, &layer.w_v, cfg.d_model, None, &mut v);
        for j in 0..cfg.d_model {
            let mean = (0..7).map(|i| v[i * cfg.d_model + j]).sum::<f64>() / 7.0;
            for i in 0..7 {
                assert!((a[(i, j)] - mean).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_row_attention_returns_value_row() {
        let cfg = NetConfig::default();
        let w = unflatten(&init_params(cfg, 2, 4).unwrap()).unwrap();
        let (_, h) = random_pop(1, cfg.d_model, 2);
        let a = multi_head_attention(&h, &w.layers[1], &cfg);
        let mut v = vec![0.0; cfg.d_model];
        affine(h.as_slice(), 1, cfg.d_model, &w.layers[1].w_v, cfg.d_model, None, &mut v);
        for j in 0..cfg.d_model {
            assert!((a[(0, j)] - v[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn block_is_permutation_equivariant() {
        let cfg = NetConfig::default();
        let w = unflatten(&init_params(cfg, 2, 9).unwrap()).unwrap();
        let (_, y) = random_pop(12, cfg.d_model, 3);
        let mut perm: Vec<usize> = (0..12).collect();
        perm.shuffle(&mut stream(5));
        let out = attention_block(&y, &w.layers[0], &cfg);
        let out_p = attention_block(&y.select_rows(&perm), &w.layers[0], &cfg);
        for (pi, &src) in perm.iter().enumerate() {
            for j in 0..cfg.d_model {
                assert!((out_p[(pi, j)] - out[(src, j)]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn zero_parameters_give_constant_output() {
        let p = LqdParams::zeros(NetConfig::default(), 2);
        let (f, d) = random_pop(2, 2, 8);
        let out = forward_competition(&p, &f, &d).unwrap();
        assert_eq!(out, vec![0.0, 0.0]);
        let (f, d) = random_pop(33, 2, 9);
        let out = forward_competition(&p, &f, &d).unwrap();
        assert!(out.iter().all(|v| *v == out[0]));
    }

    #[test]
    fn affine_fitness_invariance() {
        let p = init_params(NetConfig::default(), 2, 12).unwrap();
        let (f, d) = random_pop(40, 2, 13);
        let g: Vec<f64> = f.iter().map(|v| 3.0 * v - 11.0).collect();
        let a = forward_competition(&p, &f, &d).unwrap();
        let b = forward_competition(&p, &g, &d).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-5);
        }
    }

    #[test]
    fn identity_parameters_reproduce_standardized_fitness() {
        let p = identity_params(NetConfig::default(), 2).unwrap();
        let (f, d) = random_pop(20, 2, 14);
        let out = forward_competition(&p, &f, &d).unwrap();
        let z = featurize(&f, &d);
        for i in 0..20 {
            assert_eq!(out[i], z[(i, 0)]);
        }
    }

    #[test]
    fn any_population_size() {
        let p = init_params(NetConfig::default(), 2, 15).unwrap();
        let m = LqdModel::new(p).unwrap();
        for n in [1, 2, 5, 128, 300] {
            let (f, d) = random_pop(n, 2, n as u64);
            let out = m.forward_competition(&f, &d).unwrap();
            assert_eq!(out.len(), n);
            assert!(out.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn rejects_descriptor_dimension_mismatch() {
        let p = init_params(NetConfig::default(), 2, 0).unwrap();
        let (f, d) = random_pop(4, 3, 0);
        assert!(matches!(forward_competition(&p, &f, &d), Err(Error::Config { .. })));
        let mut rng = stream(0);
        let _: f64 = rng.gen();
    }

    #[cfg(target_arch = "x86_64")]
    #[test]
    fn vector_paths_agree_bitwise() {
        if !std::is_x86_feature_detected!("avx2") {
            return;
        }
        let m = LqdModel::new(init_params(NetConfig::default(), 2, 11).unwrap()).unwrap();
        for n in [1, 7, 40, 129] {
            let (f, d) = random_pop(n, 2, n as u64);
            let wide = unsafe { m.forward_avx2(&f, &d) };
            assert_eq!(wide, m.forward_unchecked(&f, &d));
        }
    }

    #[test]
    fn fixed_width_attention_matches_generic() {
        let cfg = NetConfig::default();
        let dm = cfg.d_model;
        let mut rng = stream(77);
        for n in [1, 2, 3, 4, 5, 9, 40] {
            let mut g = || (0..n * dm).map(|_| rng.sample::<f64, _>(StandardNormal) * 3.0).collect::<Vec<_>>();
            let (q, k, v) = (g(), g(), g());
            let mut a = vec![0.0; n * dm];
            let mut b = vec![0.0; n * dm];
            let mut kt = vec![0.0; n * cfg.head_dim()];
            let mut sc = vec![0.0; n];
            attend_generic(&q, &k, &v, n, &cfg, &mut a, &mut kt, &mut sc);
            attend_heads::<4>(&q, &k, &v, n, &cfg, &mut b, &mut kt, &mut sc);
            assert_eq!(a, b);
        }
    }
}
