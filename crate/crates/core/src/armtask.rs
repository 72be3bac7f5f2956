//! Planar redundant arm: `J` links of length `1/J`, joint angles mapped from
//! the unit box. Fitness rewards equal joint angles, the descriptor is the
//! end-effector position.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmSpec {
    pub joints: usize,
}

impl Default for ArmSpec {
    fn default() -> Self {
        Self { joints: 8 }
    }
}

impl ArmSpec {
    pub fn link_length(&self) -> f64 {
        1.0 / self.joints as f64
    }

    pub fn angles(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| PI * (2.0 * v - 1.0)).collect()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<(f64, [f64; 2])> {
        if x.len() != self.joints {
            return Err(Error::Input(format!(
                "arm genotype must have {} entries, got {}",
                self.joints,
                x.len()
            )));
        }
        if x.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Input("arm genotype outside [0, 1]".into()));
        }
        let alpha = self.angles(x);
        let n = alpha.len() as f64;
        let mean = alpha.iter().sum::<f64>() / n;
        let var = alpha.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;

        let l = self.link_length();
        let mut theta = 0.0;
        let mut pos = [0.0, 0.0];
        for a in &alpha {
            theta += a;
            pos[0] += l * theta.cos();
            pos[1] += l * theta.sin();
        }
        Ok((-var.sqrt(), pos))
    }
}

/// Evaluate the default 8-joint arm.
pub fn arm_evaluate(x: &[f64]) -> Result<(f64, [f64; 2])> {
    ArmSpec::default().evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn straight_arm() {
        let (f, d) = arm_evaluate(&[0.5; 8]).unwrap();
        assert_eq!(f, 0.0);
        assert!((d[0] - 1.0).abs() < 1e-12 && d[1].abs() < 1e-12);
    }

    #[test]
    fn folded_first_joint() {
        // α = (π, 0, …, 0): every link points along −x; angle std is
        // sqrt(7)·π/8 (mean π/8, one deviation of 7π/8, seven of −π/8).
        let mut x = [0.5; 8];
        x[0] = 1.0;
        let (f, d) = arm_evaluate(&x).unwrap();
        let expected = (PI / 8.0) * 7f64.sqrt();
        assert!((f + expected).abs() < 1e-12);
        assert!((d[0] + 1.0).abs() < 1e-9 && d[1].abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_box() {
        assert!(arm_evaluate(&[1.2; 8]).is_err());
        assert!(arm_evaluate(&[0.5; 7]).is_err());
    }

    proptest! {
        #[test]
        fn equal_angles_zero_fitness(c in 0.0f64..=1.0) {
            let (f, _) = arm_evaluate(&[c; 8]).unwrap();
            prop_assert!(f.abs() < 1e-12);
        }

        #[test]
        fn reach_and_mirror(x in proptest::collection::vec(0.0f64..=1.0, 8)) {
            let (f, d) = arm_evaluate(&x).unwrap();
            prop_assert!(f <= 0.0);
            prop_assert!((d[0] * d[0] + d[1] * d[1]).sqrt() <= 1.0 + 1e-9);
            let mirrored: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
            let (fm, dm) = arm_evaluate(&mirrored).unwrap();
            prop_assert!((f - fm).abs() < 1e-12);
            prop_assert!((d[0] - dm[0]).abs() < 1e-12);
            prop_assert!((d[1] + dm[1]).abs() < 1e-12);
        }
    }
}
