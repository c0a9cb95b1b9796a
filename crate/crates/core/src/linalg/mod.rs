//! Exact dense linear algebra over a [`FiniteField`](crate::field::FiniteField).

mod echelon;
mod matrix;
mod rref;
mod subspace;

pub use echelon::EchelonBasis;
pub use matrix::Matrix;
pub use subspace::{image, kernel, preimage, Subspace};
