//! Finite-dimensional Lie algebras over the rationals.

mod algebra;
pub mod catalog;
mod levi;

pub use algebra::{isotropy_from_linear_part, signature, LieAlgebra};
pub use levi::{levi_lift, verify_levi_split, LeviSplit, LeviViolation};
