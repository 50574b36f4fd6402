//! Exact rationals, rational vectors and the small amount of linear algebra
//! the rest of the crate needs. No floating point anywhere.

mod matrix;
mod qvec;
mod rat;

pub use matrix::{kernel_basis, lin_solve, Matrix};
pub use qvec::{primitive, QVec};
pub use rat::{CRat, Rat};
