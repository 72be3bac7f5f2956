//! Auxiliary transformations shared by the BBOB functions.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::Matrix;
use crate::rng::Stream;

/// Oscillation transform applied to a scalar.
#[inline]
pub fn t_osz_scalar(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let xh = x.abs().ln();
    let (c1, c2) = if x > 0.0 { (10.0, 7.9) } else { (5.5, 3.1) };
    x.signum() * (xh + 0.049 * ((c1 * xh).sin() + (c2 * xh).sin())).exp()
}

pub fn t_osz(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = t_osz_scalar(*v);
    }
}

/// Exponent ratio i/(n-1), taken as 0 in one dimension.
#[inline]
pub fn ratio(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

/// Asymmetry transform with strength `beta`.
pub fn t_asy(x: &mut [f64], beta: f64) {
    let n = x.len();
    for (i, v) in x.iter_mut().enumerate() {
        if *v > 0.0 {
            *v = v.powf(1.0 + beta * ratio(i, n) * v.sqrt());
        }
    }
}

/// Multiply in place by the diagonal conditioning matrix with ratio `alpha`.
pub fn lambda(x: &mut [f64], alpha: f64) {
    let n = x.len();
    for (i, v) in x.iter_mut().enumerate() {
        *v *= alpha.powf(0.5 * ratio(i, n));
    }
}

/// Boundary penalty: squared excess outside [-5, 5] per coordinate.
pub fn f_pen(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| {
            let e = v.abs() - 5.0;
            if e > 0.0 {
                e * e
            } else {
                0.0
            }
        })
        .sum()
}

/// Random orthogonal matrix: modified Gram-Schmidt on a standard-normal matrix.
pub fn random_rotation(n: usize, rng: &mut Stream) -> Matrix {
    loop {
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let mut degenerate = false;
        for i in 0..n {
            for j in 0..i {
                let (head, tail) = rows.split_at_mut(i);
                let proj: f64 = head[j].iter().zip(&tail[0]).map(|(a, b)| a * b).sum();
                for (v, u) in tail[0].iter_mut().zip(&head[j]) {
                    *v -= proj * u;
                }
            }
            let nrm = rows[i].iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm < 1e-10 {
                degenerate = true;
                break;
            }
            rows[i].iter_mut().for_each(|v| *v /= nrm);
        }
        if !degenerate {
            // a second pass tightens orthogonality to machine precision
            for i in 0..n {
                for j in 0..i {
                    let (head, tail) = rows.split_at_mut(i);
                    let proj: f64 = head[j].iter().zip(&tail[0]).map(|(a, b)| a * b).sum();
                    for (v, u) in tail[0].iter_mut().zip(&head[j]) {
                        *v -= proj * u;
                    }
                }
                let nrm = rows[i].iter().map(|v| v * v).sum::<f64>().sqrt();
                rows[i].iter_mut().for_each(|v| *v /= nrm);
            }
            return Matrix::from_rows(&rows);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn rotation_is_orthogonal() {
        let mut rng = stream(3);
        for n in [1, 2, 5, 12, 32] {
            let r = random_rotation(n, &mut rng);
            let rtr = r.transpose().matmul(&r);
            for i in 0..n {
                for j in 0..n {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((rtr[(i, j)] - e).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn t_osz_fixes_zero_and_keeps_sign() {
        assert_eq!(t_osz_scalar(0.0), 0.0);
        assert!(t_osz_scalar(-2.0) < 0.0);
        assert!(t_osz_scalar(2.0) > 0.0);
        // the transform is the identity at |x| = 1
        assert!((t_osz_scalar(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn t_asy_leaves_negatives() {
        let mut v = vec![-1.0, -2.0, 3.0];
        t_asy(&mut v, 0.5);
        assert_eq!(&v[..2], &[-1.0, -2.0]);
        assert!(v[2] > 3.0);
    }
}
