use rayon::prelude::*;

use crate::caputo_time::StepWeights;
use crate::error::{Error, Result};

/// Nodes per parallel chunk of the memory sum. Each node is summed over the
/// snapshots in a fixed order, so the result does not depend on threading.
const NODE_CHUNK: usize = 128;

/// Past states `u⁰, …, uⁿ⁻¹` and their times.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryBuffer {
    snapshots: Vec<Vec<f64>>,
    times: Vec<f64>,
}

impl HistoryBuffer {
    pub fn new(u0: Vec<f64>) -> Self {
        Self::starting_at(0.0, u0)
    }

    /// A buffer whose first snapshot is taken at `t0`.
    pub fn starting_at(t0: f64, u0: Vec<f64>) -> Self {
        Self {
            snapshots: vec![u0],
            times: vec![t0],
        }
    }

    /// Number of stored snapshots (at least one).
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.snapshots[0].len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn last(&self) -> &[f64] {
        self.snapshots.last().expect("history is never empty")
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().expect("history is never empty")
    }

    pub fn snapshot(&self, k: usize) -> &[f64] {
        &self.snapshots[k]
    }

    pub fn push(&mut self, t: f64, u: Vec<f64>) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.len(),
            });
        }
        if !(t > self.last_time()) {
            return Err(Error::domain("t", t, "later than the last snapshot"));
        }
        self.snapshots.push(u);
        self.times.push(t);
        Ok(())
    }

    /// The common step if every stored step has the same length.
    pub fn uniform_dt(&self) -> Option<f64> {
        let dt = self.times.get(1)? - self.times[0];
        let uniform = self
            .times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-12 * dt);
        uniform.then_some(dt)
    }

    /// `Σ_{k=1..n−1} past[k−1]·(u^k − u^{k−1})`, node by node.
    pub fn memory(&self, weights: &StepWeights) -> Result<Vec<f64>> {
        if weights.past.len() + 1 != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len() - 1,
                got: weights.past.len(),
            });
        }
        let mut out = vec![0.0; self.dim()];
        let accumulate = |offset: usize, chunk: &mut [f64]| {
            let end = offset + chunk.len();
            for (k, w) in weights.past.iter().enumerate() {
                let newer = &self.snapshots[k + 1][offset..end];
                let older = &self.snapshots[k][offset..end];
                for ((m, a), b) in chunk.iter_mut().zip(newer).zip(older) {
                    *m += w * (a - b);
                }
            }
        };
        if self.dim() >= 2 * NODE_CHUNK && self.len() > 64 {
            out.par_chunks_mut(NODE_CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| accumulate(c * NODE_CHUNK, chunk));
        } else {
            accumulate(0, &mut out);
        }
        Ok(out)
    }
}
