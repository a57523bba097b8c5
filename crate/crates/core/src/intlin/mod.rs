//! Exact integer linear algebra over arbitrary-precision integers.

mod grading;
mod hnf;
mod matrix;
pub mod text;

pub use grading::{integer_grading, positive_grading_witness};
pub use hnf::{
    ext_gcd, gale_from_basis, gale_transforms, hnf, hnf_rows, kernel_basis, parallel, rank,
    row_space_rows, LatticeBasis,
};
pub use matrix::{IntMatrix, IntVector, RationalVector};
