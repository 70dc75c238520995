//! Exact integer matrix algebra: Hermite and Smith normal forms, integer
//! kernels, linear solving and lattice reduction.

mod matrix;
mod normal_form;

pub use matrix::{ivec, unit_vector, zero_vector, IntMatrix, IntVector};
pub use normal_form::{
    determinant, hnf, kernel_basis, lattice_basis, rank, reduce_mod_echelon, snf, solve, unimodular_inverse,
    LinearSystem, SnfResult,
};
