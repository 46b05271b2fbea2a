//! Regional fractional Laplacian on a uniform 1D grid with zero exterior data,
//! and its principal Dirichlet eigenpair.
//!
//! The operator is
//!
//! ```text
//! (−Δ)^s_Ω u(x) = C_{1,s} P.V. ∫_Ω (u(x) − u(ξ)) / |x − ξ|^{1+2s} dξ,
//! C_{1,s} = 4^s Γ(1/2 + s) / (√π |Γ(−s)|).
//! ```
//!
//! Unknowns live on the interior nodes `x_i = a + i·h`, `i = 1..n`; the two
//! boundary nodes carry the value zero.

mod assembly;
mod eigen;
mod grid;

pub use assembly::{
    apply, assemble_auxiliary, assemble_regional, normalizing_constant, AuxiliaryOperator,
    OperatorMatrix,
};
pub use eigen::{dense_eigenpair, principal_eigenpair, EigenPair};
pub use grid::{Field, Grid1D};
