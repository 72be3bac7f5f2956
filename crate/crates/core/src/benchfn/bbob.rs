//! Noiseless BBOB functions in minimization form, generalized so that every
//! instance's optimum sits at its sampled `x_opt`.

use std::f64::consts::PI;

use super::transforms::{f_pen, lambda, ratio, t_asy, t_osz, t_osz_scalar};
use super::{FunctionId, ObjectiveInstance};

pub(super) fn raw(inst: &ObjectiveInstance, x: &[f64]) -> f64 {
    use FunctionId::*;
    let n = inst.dim;
    match inst.function {
        Sphere => x
            .iter()
            .zip(&inst.x_opt)
            .map(|(a, b)| (a - b) * (a - b))
            .sum(),
        EllipsoidalSeparable => {
            let mut z = shifted(inst, x);
            t_osz(&mut z);
            ellipsoid(&z)
        }
        RastriginSeparable => {
            let mut z = shifted(inst, x);
            t_osz(&mut z);
            t_asy(&mut z, 0.2);
            lambda(&mut z, 10.0);
            rastrigin(&z)
        }
        BucheRastrigin => {
            let mut z = shifted(inst, x);
            t_osz(&mut z);
            for (i, v) in z.iter_mut().enumerate() {
                let mut s = 10f64.powf(0.5 * ratio(i, n));
                if *v > 0.0 && i % 2 == 0 {
                    s *= 10.0;
                }
                *v *= s;
            }
            rastrigin(&z) + 100.0 * f_pen(x)
        }
        LinearSlope => x
            .iter()
            .zip(&inst.x_opt)
            .enumerate()
            .map(|(i, (&xi, &oi))| {
                let s = oi.signum() * 10f64.powf(ratio(i, n));
                let z = if oi * xi < 25.0 { xi } else { oi };
                5.0 * s.abs() - s * z
            })
            .sum(),
        AttractiveSector => {
            let mut z = inst.rotate_shifted(x);
            lambda(&mut z, 10.0);
            let z = inst.rotation_q.mul_vec(&z);
            let s: f64 = z
                .iter()
                .zip(&inst.x_opt)
                .map(|(&zi, &oi)| {
                    let w = if zi * oi > 0.0 { 100.0 } else { 1.0 };
                    (w * zi) * (w * zi)
                })
                .sum();
            t_osz_scalar(s).powf(0.9)
        }
        StepEllipsoidal => {
            let mut zh = inst.rotate_shifted(x);
            lambda(&mut zh, 10.0);
            let zt: Vec<f64> = zh
                .iter()
                .map(|&v| {
                    if v.abs() > 0.5 {
                        (0.5 + v).floor()
                    } else {
                        (0.5 + 10.0 * v).floor() / 10.0
                    }
                })
                .collect();
            let z = inst.rotation_q.mul_vec(&zt);
            let e: f64 = z
                .iter()
                .enumerate()
                .map(|(i, v)| 10f64.powf(2.0 * ratio(i, n)) * v * v)
                .sum();
            0.1 * (zh[0].abs() / 1e4).max(e) + f_pen(x)
        }
        Rosenbrock => {
            let c = rosen_scale(n);
            let z: Vec<f64> = shifted(inst, x).iter().map(|v| c * v + 1.0).collect();
            rosenbrock(&z)
        }
        RosenbrockRotated => {
            let c = rosen_scale(n);
            let z: Vec<f64> = inst.rotate_shifted(x).iter().map(|v| c * v + 1.0).collect();
            rosenbrock(&z)
        }
        Ellipsoidal => {
            let mut z = inst.rotate_shifted(x);
            t_osz(&mut z);
            ellipsoid(&z)
        }
        Discus => {
            let mut z = inst.rotate_shifted(x);
            t_osz(&mut z);
            1e6 * z[0] * z[0] + z[1..].iter().map(|v| v * v).sum::<f64>()
        }
        BentCigar => {
            let mut z = inst.rotate_shifted(x);
            t_asy(&mut z, 0.5);
            let z = inst.rotation.mul_vec(&z);
            z[0] * z[0] + 1e6 * z[1..].iter().map(|v| v * v).sum::<f64>()
        }
        SharpRidge => {
            let mut z = inst.rotate_shifted(x);
            lambda(&mut z, 10.0);
            let z = inst.rotation_q.mul_vec(&z);
            z[0] * z[0] + 100.0 * z[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
        }
        DifferentPowers => {
            let z = inst.rotate_shifted(x);
            z.iter()
                .enumerate()
                .map(|(i, v)| v.abs().powf(2.0 + 4.0 * ratio(i, n)))
                .sum::<f64>()
                .sqrt()
        }
        Rastrigin => {
            let mut z = inst.rotate_shifted(x);
            t_osz(&mut z);
            t_asy(&mut z, 0.2);
            let mut z = inst.rotation_q.mul_vec(&z);
            lambda(&mut z, 10.0);
            let z = inst.rotation.mul_vec(&z);
            rastrigin(&z)
        }
        Weierstrass => {
            let mut z = inst.rotate_shifted(x);
            t_osz(&mut z);
            let mut z = inst.rotation_q.mul_vec(&z);
            lambda(&mut z, 0.01);
            let z = inst.rotation.mul_vec(&z);
            let f0: f64 = (0..12)
                .map(|k| 0.5f64.powi(k) * (PI * 3f64.powi(k)).cos())
                .sum();
            let s: f64 = z
                .iter()
                .map(|&zi| {
                    (0..12)
                        .map(|k| 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * (zi + 0.5)).cos())
                        .sum::<f64>()
                })
                .sum();
            10.0 * (s / n as f64 - f0).powi(3) + 10.0 / n as f64 * f_pen(x)
        }
        SchaffersF7 => schaffers(inst, x, 10.0),
        SchaffersF7Ill => schaffers(inst, x, 1000.0),
        GriewankRosenbrock => {
            let c = rosen_scale(n);
            let z: Vec<f64> = inst.rotate_shifted(x).iter().map(|v| c * v + 1.0).collect();
            let s: f64 = z
                .windows(2)
                .map(|w| {
                    let s = 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2);
                    s / 4000.0 - s.cos()
                })
                .sum();
            10.0 / (n - 1) as f64 * s + 10.0
        }
        Schwefel => {
            let two_abs: Vec<f64> = inst.x_opt.iter().map(|o| 2.0 * o.abs()).collect();
            let xh: Vec<f64> = x
                .iter()
                .zip(&inst.x_opt)
                .map(|(xi, oi)| 2.0 * oi.signum() * xi)
                .collect();
            let mut zh = xh.clone();
            for i in 1..n {
                zh[i] = xh[i] + 0.25 * (xh[i - 1] - two_abs[i - 1]);
            }
            let mut d: Vec<f64> = zh.iter().zip(&two_abs).map(|(a, b)| a - b).collect();
            lambda(&mut d, 10.0);
            let z: Vec<f64> = d.iter().zip(&two_abs).map(|(a, b)| 100.0 * (a + b)).collect();
            let s: f64 = z.iter().map(|v| v * v.abs().sqrt().sin()).sum();
            let scaled: Vec<f64> = z.iter().map(|v| v / 100.0).collect();
            -s / (100.0 * n as f64) + 4.189_828_872_724_339 + 100.0 * f_pen(&scaled)
        }
        Katsuura => {
            let mut z = inst.rotate_shifted(x);
            lambda(&mut z, 100.0);
            let z = inst.rotation_q.mul_vec(&z);
            let nf = n as f64;
            let expo = 10.0 / nf.powf(1.2);
            let prod: f64 = z
                .iter()
                .enumerate()
                .map(|(i, &zi)| {
                    let s: f64 = (1..=32)
                        .map(|j| {
                            let p = 2f64.powi(j);
                            (p * zi - (p * zi).round()).abs() / p
                        })
                        .sum();
                    (1.0 + (i + 1) as f64 * s).powf(expo)
                })
                .product();
            10.0 / (nf * nf) * prod - 10.0 / (nf * nf) + f_pen(x)
        }
        Lunacek => {
            let mu0 = 2.5;
            let d = 1.0;
            let nf = n as f64;
            let s = 1.0 - 1.0 / (2.0 * (nf + 20.0).sqrt() - 8.2);
            let mu1 = -((mu0 * mu0 - d) / s).sqrt();
            let xh: Vec<f64> = x
                .iter()
                .zip(&inst.x_opt)
                .map(|(xi, oi)| 2.0 * oi.signum() * xi)
                .collect();
            let shifted: Vec<f64> = xh.iter().map(|v| v - mu0).collect();
            let mut z = inst.rotation.mul_vec(&shifted);
            lambda(&mut z, 100.0);
            let z = inst.rotation_q.mul_vec(&z);
            let a: f64 = xh.iter().map(|v| (v - mu0).powi(2)).sum();
            let b: f64 = d * nf + s * xh.iter().map(|v| (v - mu1).powi(2)).sum::<f64>();
            let cos: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
            a.min(b) + 10.0 * (nf - cos) + 1e4 * f_pen(x)
        }
        Gallagher101 | Gallagher21 | Ackley | DixonPrice | Salomon | Levy => {
            unreachable!("held-out functions are evaluated in ood.rs")
        }
    }
}

fn shifted(inst: &ObjectiveInstance, x: &[f64]) -> Vec<f64> {
    x.iter().zip(&inst.x_opt).map(|(a, b)| a - b).collect()
}

fn rosen_scale(n: usize) -> f64 {
    1f64.max((n as f64).sqrt() / 8.0)
}

fn ellipsoid(z: &[f64]) -> f64 {
    let n = z.len();
    z.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(6.0 * ratio(i, n)) * v * v)
        .sum()
}

fn rastrigin(z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let cos: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
    let sq: f64 = z.iter().map(|v| v * v).sum();
    10.0 * (n - cos) + sq
}

fn rosenbrock(z: &[f64]) -> f64 {
    z.windows(2)
        .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

fn schaffers(inst: &ObjectiveInstance, x: &[f64], cond: f64) -> f64 {
    let n = inst.dim;
    let mut z = inst.rotate_shifted(x);
    t_asy(&mut z, 0.5);
    let mut z = inst.rotation_q.mul_vec(&z);
    lambda(&mut z, cond);
    let s: f64 = z
        .windows(2)
        .map(|w| {
            let s = (w[0] * w[0] + w[1] * w[1]).sqrt();
            s.sqrt() + s.sqrt() * (50.0 * s.powf(0.2)).sin().powi(2)
        })
        .sum();
    (s / (n - 1) as f64).powi(2) + 10.0 * f_pen(x)
}
