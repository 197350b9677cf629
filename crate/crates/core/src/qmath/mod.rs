//! Fixed-size linear algebra for qubit and two-qubit operators.
//!
//! Single-qubit operators live in [`BlochOperator`], a real Pauli expansion
//! `c0·𝟙 + c·σ`. [`ComplexMatrix`] is a dense 2×2 / 4×4 complex path used for
//! two-qubit states and as an independent check on the Bloch formulas.

pub(crate) mod bloch;
mod dense;

pub use bloch::{bloch_trace_product, BlochOperator, UnitVector3};
pub use dense::{eig_hermitian, partial_trace_first, tensor, ComplexMatrix, HermitianEigen};

/// Absolute tolerance on the smallest eigenvalue when testing positivity.
pub const TAU_POS: f64 = 1e-10;

/// Hermiticity tolerance for a matrix of Frobenius norm `norm`.
pub fn tau_herm(norm: f64) -> f64 {
    1e-10 * norm.max(1.0)
}
