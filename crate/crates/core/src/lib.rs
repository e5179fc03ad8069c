//! Exact formal normal forms at a fixed point.
//!
//! Polynomial jets over the rationals carry Poisson brackets, Lie algebra
//! actions and Lie algebroids. The engines in [`normalform`] and
//! [`algebroid`] remove nonlinear terms degree by degree by solving
//! Chevalley–Eilenberg coboundary equations exactly, or return a checkable
//! certificate that a remainder class is nonzero.

pub mod algebroid;
pub mod cohomology;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod normalform;
pub mod polyalg;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
