use std::sync::Arc;

use crate::armtask::ArmSpec;
use crate::benchfn::{self, ObjectiveInstance};
use crate::competition::Bounds;
use crate::descriptor::DescriptorSpec;
use crate::error::Result;
use crate::rng::Stream;

/// Something the evolution loop can optimize.
#[derive(Clone, Debug)]
pub enum Task {
    Bbob(Arc<ObjectiveInstance>),
    Arm(ArmSpec),
}

impl Task {
    pub fn dim(&self) -> usize {
        match self {
            Task::Bbob(i) => i.dim,
            Task::Arm(a) => a.joints,
        }
    }

    pub fn low(&self) -> Vec<f64> {
        match self {
            Task::Bbob(i) => i.low.clone(),
            Task::Arm(a) => vec![0.0; a.joints],
        }
    }

    pub fn high(&self) -> Vec<f64> {
        match self {
            Task::Bbob(i) => i.high.clone(),
            Task::Arm(a) => vec![1.0; a.joints],
        }
    }

    /// Fitness and, when the task has one, its native descriptor.
    pub fn evaluate(&self, x: &[f64], rng: &mut Stream) -> Result<(f64, Option<Vec<f64>>)> {
        match self {
            Task::Bbob(i) => Ok((benchfn::evaluate(i, x, rng)?, None)),
            Task::Arm(a) => {
                let (f, d) = a.evaluate(x)?;
                Ok((f, Some(d.to_vec())))
            }
        }
    }

    /// Box enclosing every descriptor this task can produce under `spec`.
    pub fn descriptor_bounds(&self, spec: &DescriptorSpec) -> Bounds {
        match (self, spec) {
            (_, DescriptorSpec::Projection(p)) => {
                let low = self.low();
                let high = self.high();
                let mut lo = Vec::with_capacity(p.output_dim());
                let mut hi = Vec::with_capacity(p.output_dim());
                for row in p.matrix.iter_rows() {
                    let (mut a, mut b) = (0.0, 0.0);
                    for (j, &w) in row.iter().enumerate() {
                        let (u, v) = (w * low[j], w * high[j]);
                        a += u.min(v);
                        b += u.max(v);
                    }
                    lo.push(a);
                    hi.push(b);
                }
                Bounds { low: lo, high: hi }
            }
            (Task::Arm(_), DescriptorSpec::TaskSpecific { dim }) => Bounds::uniform(*dim, -1.0, 1.0),
            (_, spec) => Bounds::uniform(spec.dim(), -3.0, 3.0),
        }
    }
}
