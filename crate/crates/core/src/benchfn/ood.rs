//! Held-out functions: Gallagher's peak functions and four classic
//! benchmarks applied in a rotated, shifted frame.

use std::f64::consts::{E, PI};

use super::transforms::{f_pen, t_osz_scalar};
use super::{FunctionId, ObjectiveInstance};

pub(super) fn raw(inst: &ObjectiveInstance, x: &[f64]) -> f64 {
    use FunctionId::*;
    match inst.function {
        Gallagher101 | Gallagher21 => gallagher(inst, x),
        Ackley => {
            let z = inst.rotate_shifted(x);
            let n = z.len() as f64;
            let sq = z.iter().map(|v| v * v).sum::<f64>() / n;
            let cs = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
            -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
        }
        DixonPrice => {
            let z: Vec<f64> = inst
                .rotate_shifted(x)
                .iter()
                .enumerate()
                .map(|(i, v)| v + dixon_price_optimum(i))
                .collect();
            let head = (z[0] - 1.0).powi(2);
            head + z
                .windows(2)
                .enumerate()
                .map(|(i, w)| (i + 2) as f64 * (2.0 * w[1] * w[1] - w[0]).powi(2))
                .sum::<f64>()
        }
        Salomon => {
            let r = inst.rotate_shifted(x).iter().map(|v| v * v).sum::<f64>().sqrt();
            1.0 - (2.0 * PI * r).cos() + 0.1 * r
        }
        Levy => {
            let w: Vec<f64> = inst
                .rotate_shifted(x)
                .iter()
                .map(|v| 1.0 + v / 4.0)
                .collect();
            let n = w.len();
            let first = (PI * w[0]).sin().powi(2);
            let mid: f64 = w[..n - 1]
                .iter()
                .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                .sum();
            let last = (w[n - 1] - 1.0).powi(2) * (1.0 + (2.0 * PI * w[n - 1]).sin().powi(2));
            first + mid + last
        }
        _ => unreachable!("training functions are evaluated in bbob.rs"),
    }
}

/// Coordinate `i` (0-based) of the Dixon-Price minimizer, 2^{-(2^k - 2)/2^k} with k = i + 1.
pub(crate) fn dixon_price_optimum(i: usize) -> f64 {
    let p = 2f64.powi(i as i32 + 1);
    2f64.powf(-(p - 2.0) / p)
}

fn gallagher(inst: &ObjectiveInstance, x: &[f64]) -> f64 {
    let peaks = inst
        .peaks
        .as_ref()
        .expect("gallagher instance without peaks");
    let n = inst.dim as f64;
    let mut best = f64::NEG_INFINITY;
    let mut diff = vec![0.0; inst.dim];
    for i in 0..peaks.weights.len() {
        for (d, (xi, ci)) in diff.iter_mut().zip(x.iter().zip(peaks.centers.row(i))) {
            *d = xi - ci;
        }
        let u = inst.rotation.mul_vec(&diff);
        let q: f64 = u
            .iter()
            .zip(peaks.conditioning.row(i))
            .map(|(v, c)| c * v * v)
            .sum();
        best = best.max(peaks.weights[i] * (-q / (2.0 * n)).exp());
    }
    t_osz_scalar(10.0 - best).powi(2) + f_pen(x)
}
