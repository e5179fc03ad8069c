use thiserror::Error;

/// Front-end failures; all map to exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Engine(#[from] jetnorm_core::Error),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        use jetnorm_core::Error as E;
        match self {
            CliError::Parse { .. } => "parse_error",
            CliError::Input(_) => "invalid_input",
            CliError::Io(_) => "io_error",
            CliError::Engine(e) => match e {
                E::DimensionMismatch { .. } => "dimension_mismatch",
                E::TruncationMismatch { .. } => "truncation_mismatch",
                E::ZeroOrder => "zero_order",
                E::SingularLinearPart => "singular_linear_part",
                E::NotVanishingAtOrigin { .. } => "not_vanishing_at_origin",
                E::NotAntisymmetric { .. } => "not_antisymmetric",
                E::JacobiFailure { .. } => "jacobi_failure",
                E::NotLieAlgebra(_) => "not_lie_algebra",
                E::NotRepresentation(_) => "not_representation",
                E::NotAnAction { .. } => "not_an_action",
                E::InvalidAlgebroid(_) => "invalid_algebroid",
                E::InputNotCocycle => "input_not_cocycle",
                E::PreconditionNotNormalized { .. } => "precondition_not_normalized",
                E::SplitNotCertified(_) => "split_not_certified",
                E::SplitAlgebraMismatch => "split_algebra_mismatch",
                E::SolverFailure(_) => "solver_failure",
                E::NonPositiveRadius => "non_positive_radius",
                E::OrderTooLarge { .. } => "order_too_large",
                E::InvalidInput(_) => "invalid_input",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// 1-based line and column of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[start..].chars().count() + 1)
}

pub(crate) fn parse_error(text: &str, offset: usize, message: impl Into<String>) -> CliError {
    let (line, column) = line_column(text, offset);
    CliError::Parse {
        line,
        column,
        message: message.into(),
    }
}
