//! Truncated polynomial algebra: jets, coordinate changes, bivectors, 1-forms
//! and vector fields.

pub mod change;
pub mod jet;
pub mod koszul;
pub mod monomial;
pub mod poisson;
pub mod vector_field;

pub use change::{compose_change, invert_change, CoordChange};
pub use jet::{default_names, Jet, Substitution};
pub use koszul::{koszul_bracket, lie_derivative, sharp, PolyOneForm};
pub use monomial::Monomial;
pub use poisson::{jacobiator, poisson_bracket, pushforward, Bivector, PoissonJet};
pub use vector_field::VectorField;
