use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::grid::{Field, Grid1D};
use crate::error::{Error, Result};
use crate::special_functions::gamma_positive;

/// Below this size row-parallel products cost more than they save.
const PARALLEL_MIN_DIM: usize = 256;

/// `C_{1,s} = 4^s Γ(1/2 + s) / (√π |Γ(−s)|)`, using `|Γ(−s)| = Γ(1 − s)/s`.
pub fn normalizing_constant(s: f64) -> Result<f64> {
    check_order(s)?;
    Ok(s * 4f64.powf(s) * gamma_positive(0.5 + s)
        / (std::f64::consts::PI.sqrt() * gamma_positive(1.0 - s)))
}

fn check_order(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("s", s, "0 < s < 1"))
    }
}

/// `∫_{d1}^{d2} r^{−1−2s} dr` for `0 < d1 < d2`.
fn kernel_integral(d1: f64, d2: f64, s: f64) -> f64 {
    let two_s = 2.0 * s;
    -d1.powf(-two_s) * (-two_s * ((d2 - d1) / d1).ln_1p()).exp_m1() / two_s
}

/// Coupling weights of one grid row, shared by the square and auxiliary
/// assemblies.
struct Stencil {
    n: usize,
    c: f64,
    /// `far[m]`: kernel integral over a full cell at distance `m ≥ 1`.
    far: Vec<f64>,
    /// Weight of the closed-form singular-cell correction.
    sigma: f64,
    h: f64,
    s: f64,
}

impl Stencil {
    fn new(grid: &Grid1D, s: f64) -> Result<Self> {
        let h = grid.h();
        let n = grid.n();
        let far = (0..=n + 1)
            .map(|m| {
                if m == 0 {
                    0.0
                } else {
                    kernel_integral((m as f64 - 0.5) * h, (m as f64 + 0.5) * h, s)
                }
            })
            .collect();
        // ∫_{−h/2}^{h/2} r² |r|^{−1−2s} dr / 2, times the second difference 1/h²
        let sigma = (0.5 * h).powf(2.0 - 2.0 * s) / ((2.0 - 2.0 * s) * h * h);
        Ok(Self {
            n,
            c: normalizing_constant(s)?,
            far,
            sigma,
            h,
            s,
        })
    }

    /// Half-cell weight of the boundary node at distance `m` nodes.
    fn half(&self, m: usize) -> f64 {
        kernel_integral((m as f64 - 0.5) * self.h, m as f64 * self.h, self.s)
    }

    /// Off-diagonal coupling to a node `m ≥ 1` positions away, boundary or not.
    fn coupling(&self, m: usize, boundary: bool) -> f64 {
        let w = if boundary { self.half(m) } else { self.far[m] };
        let local = if m == 1 { self.sigma } else { 0.0 };
        -self.c * (w + local)
    }

    /// Diagonal entry of interior row `i ∈ 1..=n`.
    fn diagonal(&self, i: usize) -> f64 {
        let left: f64 = self.far[1..i].iter().sum();
        let right: f64 = self.far[1..=self.n - i].iter().sum();
        let halves = self.half(i) + self.half(self.n + 1 - i);
        self.c * (left + right + halves + 2.0 * self.sigma)
    }
}

/// Dense symmetric matrix of the discrete operator on the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<f64>,
    s: f64,
    c_ns: f64,
}

impl OperatorMatrix {
    /// Wraps a row-major matrix, rejecting asymmetric or non-finite input.
    pub fn from_dense(entries: Vec<f64>, dim: usize, s: f64, c_ns: f64) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Assembly("non-finite matrix entry".into()));
        }
        let op = Self {
            dim,
            entries,
            s,
            c_ns,
        };
        let asym = op.asymmetry();
        if asym > 1e-12 {
            return Err(Error::Assembly(format!(
                "relative asymmetry {asym:e} exceeds 1e-12"
            )));
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn c_ns(&self) -> f64 {
        self.c_ns
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A_ij − A_ji| / max |A|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let row = |r: &[f64]| r.iter().zip(v).map(|(a, x)| a * x).sum();
        if self.dim >= PARALLEL_MIN_DIM {
            Ok(self.entries.par_chunks(self.dim).map(row).collect())
        } else {
            Ok(self.entries.chunks(self.dim).map(row).collect())
        }
    }

    /// `vᵀ A v`.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        let av = self.matvec(v)?;
        Ok(av.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// Writes every entry as a zero-based `i j value` line.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                writeln!(out, "{i} {j} {:.14e}", self.get(i, j))?;
            }
        }
        out.flush()
    }

    pub fn dump_triplets(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_triplets(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }
}

/// Assembles the regional operator on the interior nodes of `grid`.
///
/// Off-singular cells use the exact kernel integral over the cell times the
/// nodal difference; the two boundary nodes own half-cells and carry zero.
/// On the singular cell the odd part of `u(x_i) − u(ξ)` cancels and the
/// quadratic part, modelled by the centred second difference, is integrated
/// against the kernel in closed form.
pub fn assemble_regional(grid: &Grid1D, s: f64) -> Result<OperatorMatrix> {
    check_order(s)?;
    let st = Stencil::new(grid, s)?;
    let n = grid.n();
    let mut entries = vec![0.0; n * n];
    entries.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
        let i = r + 1;
        for (c, e) in row.iter_mut().enumerate() {
            *e = if c == r {
                st.diagonal(i)
            } else {
                st.coupling(r.abs_diff(c), false)
            };
        }
    });
    OperatorMatrix::from_dense(entries, n, s, st.c)
}

/// The `n × (n + 2)` operator acting on all nodes including the boundary
/// ones, before the boundary values are fixed at zero. Its rows sum to zero,
/// so it annihilates constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryOperator {
    rows: usize,
    entries: Vec<f64>,
}

impl AuxiliaryOperator {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.rows + 2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols() + j]
    }

    /// Applies the operator to values on nodes `0..=n+1`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let cols = self.cols();
        if v.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: v.len(),
            });
        }
        Ok(self
            .entries
            .chunks(cols)
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn assemble_auxiliary(grid: &Grid1D, s: f64) -> Result<AuxiliaryOperator> {
    check_order(s)?;
    let st = Stencil::new(grid, s)?;
    let n = grid.n();
    let cols = n + 2;
    let mut entries = vec![0.0; n * cols];
    entries
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(r, row)| {
            let i = r + 1;
            for (j, e) in row.iter_mut().enumerate() {
                *e = if j == i {
                    st.diagonal(i)
                } else {
                    st.coupling(i.abs_diff(j), j == 0 || j == n + 1)
                };
            }
        });
    Ok(AuxiliaryOperator { rows: n, entries })
}

pub fn apply(op: &OperatorMatrix, f: &Field) -> Result<Field> {
    Field::new(*f.grid(), op.matvec(f.values())?)
}
