use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};

use super::assembly::OperatorMatrix;
use super::grid::{Field, Grid1D};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Cholesky};

const MAX_ITERATIONS: usize = 10_000;
const EIGENVALUE_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-10;
const DENSE_FALLBACK_MAX: usize = 512;

/// Smallest eigenvalue and its positive eigenvector, scaled to unit discrete
/// integral `h·Σ e1_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda1: f64,
    pub e1: Field,
    /// `‖A e1 − λ₁ e1‖₂` for the scaled `e1`.
    pub residual: f64,
}

impl EigenPair {
    /// Writes `x,e1` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,e1")?;
        let grid = self.e1.grid();
        for (i, v) in self.e1.values().iter().enumerate() {
            writeln!(out, "{:.14e},{:.14e}", grid.node(i + 1), v)?;
        }
        out.flush()
    }

    pub fn dump_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }
}

fn check_dims(op: &OperatorMatrix, grid: &Grid1D) -> Result<()> {
    if op.dim() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: op.dim(),
        });
    }
    Ok(())
}

/// Fixes the sign, rescales to unit integral and checks positivity.
fn finish(op: &OperatorMatrix, grid: &Grid1D, lambda: f64, mut v: Vec<f64>) -> Result<EigenPair> {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
    let mass = sign * grid.integrate(&v);
    if !(mass > 0.0) {
        return Err(Error::Assembly(
            "principal eigenvector has no positive mass".into(),
        ));
    }
    for x in &mut v {
        *x *= sign / mass;
    }
    if !(lambda > 0.0) {
        return Err(Error::Assembly(format!(
            "smallest eigenvalue {lambda} is not positive"
        )));
    }
    if v.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Assembly(
            "principal eigenvector is not positive".into(),
        ));
    }
    let av = op.matvec(&v)?;
    let r: Vec<f64> = av.iter().zip(&v).map(|(a, x)| a - lambda * x).collect();
    Ok(EigenPair {
        lambda1: lambda,
        residual: norm2(&r),
        e1: Field::new(*grid, v)?,
    })
}

fn inverse_iteration(op: &OperatorMatrix, grid: &Grid1D) -> Result<(f64, Vec<f64>)> {
    let n = op.dim();
    let chol = Cholesky::factor(op.entries(), n)?;
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut previous = op.quadratic_form(&v)?;
    for _ in 0..MAX_ITERATIONS {
        chol.solve_in_place(&mut v);
        let norm = norm2(&v);
        v.iter_mut().for_each(|x| *x /= norm);
        let av = op.matvec(&v)?;
        let lambda = dot(&v, &av);
        // residual of the vector as it will be reported, scaled to unit integral
        let scale = 1.0 / grid.integrate(&v).abs();
        let residual = scale
            * norm2(
                &av.iter()
                    .zip(&v)
                    .map(|(a, x)| a - lambda * x)
                    .collect::<Vec<_>>(),
            );
        if (lambda - previous).abs() <= EIGENVALUE_TOL * lambda && residual <= RESIDUAL_TOL * lambda
        {
            return Ok((lambda, v));
        }
        previous = lambda;
    }
    Err(Error::NonConvergence {
        what: "inverse iteration",
        iterations: MAX_ITERATIONS,
    })
}

/// Principal eigenpair by inverse iteration with shift zero, falling back to
/// a dense symmetric eigendecomposition for `n ≤ 512`.
pub fn principal_eigenpair(op: &OperatorMatrix, grid: &Grid1D) -> Result<EigenPair> {
    check_dims(op, grid)?;
    match inverse_iteration(op, grid) {
        Ok((lambda, v)) => finish(op, grid, lambda, v),
        Err(e) if op.dim() > DENSE_FALLBACK_MAX => Err(e),
        Err(_) => dense_eigenpair(op, grid),
    }
}

/// Principal eigenpair from a full symmetric eigendecomposition.
pub fn dense_eigenpair(op: &OperatorMatrix, grid: &Grid1D) -> Result<EigenPair> {
    check_dims(op, grid)?;
    let n = op.dim();
    let m = DMatrix::from_row_slice(n, n, op.entries());
    let eig = SymmetricEigen::new(m);
    let (k, lambda) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Assembly("empty matrix".into()))?;
    finish(
        op,
        grid,
        lambda,
        eig.eigenvectors.column(k).iter().copied().collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_laplacian::assemble_regional;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize, s: f64) -> (Grid1D, OperatorMatrix) {
        let g = Grid1D::new(0.0, 1.0, n).unwrap();
        let a = assemble_regional(&g, s).unwrap();
        (g, a)
    }

    #[test]
    fn invariants_hold() {
        for &s in &[0.15, 0.5, 0.85] {
            let (g, a) = setup(64, s);
            let p = principal_eigenpair(&a, &g).unwrap();
            assert!(p.lambda1 > 0.0);
            assert!(p.e1.min() > 0.0);
            assert!((g.integrate(p.e1.values()) - 1.0).abs() <= 1e-12);
            assert!(p.residual <= 1e-10 * p.lambda1, "s = {s}: {}", p.residual);
        }
    }

    #[test]
    fn matches_dense_decomposition() {
        for &s in &[0.3, 0.5, 0.7] {
            let (g, a) = setup(64, s);
            let p = principal_eigenpair(&a, &g).unwrap();
            let d = dense_eigenpair(&a, &g).unwrap();
            assert!((p.lambda1 - d.lambda1).abs() <= 1e-10 * p.lambda1);
            for (x, y) in p.e1.values().iter().zip(d.e1.values()) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn symmetric_about_midpoint() {
        let (g, a) = setup(31, 0.4);
        let p = principal_eigenpair(&a, &g).unwrap();
        let v = p.e1.values();
        for i in 0..31 {
            assert!((v[i] - v[30 - i]).abs() < 1e-10);
        }
        assert_eq!(v.iter().copied().fold(0.0, f64::max), v[15]);
    }

    #[test]
    fn poincare_on_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (g, a) = setup(48, 0.6);
        let p = principal_eigenpair(&a, &g).unwrap();
        for _ in 0..100 {
            let f: Vec<f64> = (0..48).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q = a.quadratic_form(&f).unwrap();
            assert!(q >= p.lambda1 * dot(&f, &f) * (1.0 - 1e-12));
            assert!(q >= p.lambda1 * g.h() * dot(&f, &f));
        }
    }

    #[test]
    fn eigen_residual_through_apply() {
        let (g, a) = setup(32, 0.5);
        let p = principal_eigenpair(&a, &g).unwrap();
        let ae = crate::frac_laplacian::apply(&a, &p.e1).unwrap();
        for (x, y) in ae.values().iter().zip(p.e1.values()) {
            assert!((x - p.lambda1 * y).abs() <= 1e-10 * p.lambda1);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let (_, a) = setup(16, 0.5);
        let g = Grid1D::new(0.0, 1.0, 17).unwrap();
        assert!(principal_eigenpair(&a, &g).is_err());
    }

    #[test]
    fn csv_layout() {
        let (g, a) = setup(4, 0.5);
        let p = principal_eigenpair(&a, &g).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,e1");
        assert_eq!(lines.len(), 5);
        let first: Vec<f64> = lines[1].split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(first[0], 0.2);
    }
}
