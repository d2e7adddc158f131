//! Dense complex linear algebra shared by every other module.
//!
//! SVD, LU and Hessenberg reduction come from `nalgebra`; the complex Schur iteration,
//! eigenvectors, null spaces and the ordering convention are defined here.

mod decomp;
mod matrix;
mod schur;

pub use decomp::{
    condition, determinant, eigen, eigenvalues, inverse, inverse_with_tol, null_space, rank,
    singular_directions, singular_values, solve, Eigen, Side, DEFAULT_TOL_RANK,
};
pub use matrix::{
    cmp_complex, frobenius, matmul, order_key, ComplexMatrix, ComplexVector, C64, ONE, ZERO,
};
