//! Chevalley–Eilenberg complexes with exact coboundary solving.

mod complex;
mod homotopy;
mod module;

pub use complex::{
    ce_differential, cochain_dim, cohomology_dimension, differential_matrix, is_cocycle,
    solve_coboundary, Cochain, CoboundarySolution, ObstructionClass, Subsets,
};
pub use homotopy::{homotopy_bound_estimate, HomotopyBound};
pub use module::{
    hamiltonian_fields, induced_polynomial_module, poisson_polynomial_module,
    twisted_polynomial_module, vector_field_module, GModule, PolyBasis,
};
