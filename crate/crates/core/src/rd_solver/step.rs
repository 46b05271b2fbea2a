use super::history::HistoryBuffer;
use crate::caputo_time::{L1Weights, StepWeights};
use crate::error::{Error, Result};
use crate::frac_laplacian::OperatorMatrix;
use crate::linalg::Cholesky;

/// Factorizations of `(c + 1)·I + A`, keyed by the leading L1 weight `c`.
/// Only a handful of distinct steps occur in one run.
pub(crate) struct SystemCache<'a> {
    op: &'a OperatorMatrix,
    entries: Vec<(u64, Cholesky)>,
}

impl<'a> SystemCache<'a> {
    pub(crate) fn new(op: &'a OperatorMatrix) -> Self {
        Self {
            op,
            entries: Vec::new(),
        }
    }

    fn factor(&mut self, current: f64) -> Result<&Cholesky> {
        let key = current.to_bits();
        if let Some(pos) = self.entries.iter().position(|(k, _)| *k == key) {
            return Ok(&self.entries[pos].1);
        }
        let n = self.op.dim();
        let mut m = self.op.entries().to_vec();
        for i in 0..n {
            m[i * n + i] += current + 1.0;
        }
        let chol = Cholesky::factor(&m, n)?;
        self.entries.push((key, chol));
        Ok(&self.entries.last().unwrap().1)
    }

    /// Solves `(c + 1)·uⁿ + A uⁿ = c·uⁿ⁻¹ − memory + (uⁿ⁻¹)²`.
    pub(crate) fn advance(
        &mut self,
        history: &HistoryBuffer,
        weights: &StepWeights,
    ) -> Result<Vec<f64>> {
        let memory = history.memory(weights)?;
        let prev = history.last();
        let c = weights.current;
        let mut rhs: Vec<f64> = prev
            .iter()
            .zip(&memory)
            .map(|(u, m)| c * u - m + u * u)
            .collect();
        self.factor(c)?.solve_in_place(&mut rhs);
        Ok(rhs)
    }
}

/// One IMEX step of `∂^α u + A u + u = u²` on a uniform mesh: the diffusion
/// and the linear reaction are implicit, the quadratic term explicit.
///
/// Returns `uⁿ` for `n = history.len()`; reports [`Error::Overflow`] when an
/// entry reaches `blow_threshold`.
pub fn step(
    history: &HistoryBuffer,
    op: &OperatorMatrix,
    weights: &L1Weights,
    blow_threshold: f64,
) -> Result<Vec<f64>> {
    if history.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: history.dim(),
        });
    }
    let n = history.len();
    if n > weights.len() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: weights.len(),
        });
    }
    let u = SystemCache::new(op).advance(history, &weights.step_weights(n))?;
    let max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max >= blow_threshold || u.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow {
            t: n as f64 * weights.dt(),
            max,
            threshold: blow_threshold,
        });
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caputo_time::l1_weights;

    #[test]
    fn single_node_hand_value() {
        let op = OperatorMatrix::from_dense(vec![2.0], 1, 0.5, 1.0).unwrap();
        let w = l1_weights(1.0, 0.1, 1).unwrap();
        let h = HistoryBuffer::new(vec![0.5]);
        let u = step(&h, &op, &w, 1e8).unwrap();
        assert!((u[0] - 5.25 / 13.0).abs() < 1e-15);
        assert!((u[0] - 0.40385).abs() < 1e-5);
    }

    #[test]
    fn zero_stays_zero() {
        let op = OperatorMatrix::from_dense(vec![2.0, -1.0, -1.0, 2.0], 2, 0.5, 1.0).unwrap();
        let w = l1_weights(0.6, 0.05, 10).unwrap();
        let mut h = HistoryBuffer::new(vec![0.0, 0.0]);
        for n in 1..10 {
            let u = step(&h, &op, &w, 1e8).unwrap();
            assert_eq!(u, vec![0.0, 0.0]);
            h.push(n as f64 * 0.05, u).unwrap();
        }
    }

    #[test]
    fn overflow_and_mismatch() {
        let op = OperatorMatrix::from_dense(vec![0.0], 1, 0.5, 1.0).unwrap();
        let w = l1_weights(1.0, 0.5, 2).unwrap();
        let h = HistoryBuffer::new(vec![100.0]);
        assert!(matches!(
            step(&h, &op, &w, 1e3),
            Err(Error::Overflow { .. })
        ));
        let h2 = HistoryBuffer::new(vec![0.0, 0.0]);
        assert!(step(&h2, &op, &w, 1e3).is_err());
    }
}
