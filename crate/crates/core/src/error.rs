use thiserror::Error;

use crate::liealg::LeviViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation mismatch: expected order {expected}, found {found}")]
    TruncationMismatch { expected: u32, found: u32 },

    #[error("truncation order must be at least 1")]
    ZeroOrder,

    #[error("linear part is not invertible over the rationals")]
    SingularLinearPart,

    #[error("{what} does not vanish at the origin")]
    NotVanishingAtOrigin { what: String },

    #[error("bivector is not antisymmetric at entry ({i}, {j})")]
    NotAntisymmetric { i: usize, j: usize },

    #[error("Jacobi identity fails through degree {order} (first violation at component {component:?}, degree {degree})")]
    JacobiFailure {
        order: u32,
        component: (usize, usize, usize),
        degree: u32,
    },

    #[error("structure constants do not define a Lie algebra: {0}")]
    NotLieAlgebra(String),

    #[error("matrices do not define a representation: {0}")]
    NotRepresentation(String),

    #[error("action is not a Lie algebra homomorphism through degree {order}: {detail}")]
    NotAnAction { order: u32, detail: String },

    #[error("algebroid data invalid: {0}")]
    InvalidAlgebroid(String),

    #[error("cochain is not a cocycle")]
    InputNotCocycle,

    #[error("remainder is not normalized below degree {degree} (found nonzero term in degree {found})")]
    PreconditionNotNormalized { degree: u32, found: u32 },

    #[error("Levi split not certified: {0}")]
    SplitNotCertified(LeviViolation),

    #[error("Levi split does not belong to the isotropy algebra of the input")]
    SplitAlgebraMismatch,

    #[error("exact solver failed on input that satisfies its invariants: {0}")]
    SolverFailure(String),

    #[error("radius must be positive")]
    NonPositiveRadius,

    #[error("requested order {requested} exceeds the available truncation {available}")]
    OrderTooLarge { requested: u32, available: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
