//! Error type shared by every layer of the kernel.
//!
//! Each variant carries a stable machine-readable code (see [`Error::code`])
//! which the report emitter writes next to the human-readable message.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // scalar layer
    #[error("operands live in different scalar contexts")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{numerator}` is not divisible by `{denominator}` in the coordinate ring")]
    NotDivisible {
        numerator: String,
        denominator: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("syntax error at byte {position}: expected {expected}")]
    SyntaxError { position: usize, expected: String },
    #[error("no image given for `{0}`")]
    IncompleteBindings(String),
    #[error("a denominator maps to zero in the target")]
    TargetDivisionByZero,
    #[error("invalid scalar context: {0}")]
    InvalidContext(String),
    #[error("only one algebraic extension generator per context is supported")]
    UnsupportedTower,
    #[error("negative exponent outside a field context")]
    NegativeExponent,

    // algebraifold layer
    #[error("relation `{0}` is not separable in its algebraic generator")]
    NotSeparable(String),
    #[error("relation `{relation}` is reducible: it has the root {root} in the base field")]
    ReducibleRelation { relation: String, root: String },
    #[error("derivation basis action matrix is singular")]
    SingularBasisAction,
    #[error("expected {expected} coefficients, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    // tensor layer
    #[error("tensors belong to different algebraifolds")]
    DescriptorMismatch,
    #[error("slot {slot} out of range for a rank ({contravariant},{covariant}) tensor")]
    SlotOutOfRange {
        slot: usize,
        contravariant: usize,
        covariant: usize,
    },
    #[error("expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("tensor has rank ({found_contravariant},{found_covariant}), expected ({contravariant},{covariant})")]
    RankMismatch {
        contravariant: usize,
        covariant: usize,
        found_contravariant: usize,
        found_covariant: usize,
    },
    #[error("metric is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("metric is degenerate (determinant is zero)")]
    Degenerate,
    #[error("metric inverse exists only in the fraction field (determinant `{0}` is not a unit)")]
    NotInvertibleInAlgebra(String),

    // connections and field equations
    #[error("coupling `{0}` is not a constant")]
    NonConstantCoupling(String),
    #[error("gravitational coupling must be nonzero")]
    ZeroCoupling,

    // homomorphisms and lines
    #[error("relation `{relation}` is not preserved: residual `{residual}`")]
    RelationNotPreserved { relation: String, residual: String },
    #[error("no image assigned to generator `{0}`")]
    MissingImage(String),
    #[error("pullback of d{generator} does not match d of its image (residual `{residual}`)")]
    PullbackVerificationFailed { generator: String, residual: String },
    #[error("`{0}` has no antiderivative in this line")]
    NoAntiderivative(String),
    #[error("not a line: {0}")]
    NotALine(String),

    // manifests and reports
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    ValidationError(String),
    #[error("in {location}: {source}")]
    Located {
        location: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Stable identifier written into reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ContextMismatch => "context_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::NotDivisible { .. } => "not_divisible",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::UnknownIdentifier(_) => "unknown_identifier",
            Error::SyntaxError { .. } => "syntax_error",
            Error::IncompleteBindings(_) => "incomplete_bindings",
            Error::TargetDivisionByZero => "target_division_by_zero",
            Error::InvalidContext(_) => "invalid_context",
            Error::UnsupportedTower => "unsupported_tower",
            Error::NegativeExponent => "negative_exponent",
            Error::NotSeparable(_) => "not_separable",
            Error::ReducibleRelation { .. } => "reducible_relation",
            Error::SingularBasisAction => "singular_basis_action",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::DescriptorMismatch => "descriptor_mismatch",
            Error::SlotOutOfRange { .. } => "slot_out_of_range",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::NotSymmetric(..) => "not_symmetric",
            Error::Degenerate => "degenerate_metric",
            Error::NotInvertibleInAlgebra(_) => "not_invertible_in_algebra",
            Error::NonConstantCoupling(_) => "non_constant_coupling",
            Error::ZeroCoupling => "zero_coupling",
            Error::RelationNotPreserved { .. } => "relation_not_preserved",
            Error::MissingImage(_) => "missing_image",
            Error::PullbackVerificationFailed { .. } => "pullback_verification_failed",
            Error::NoAntiderivative(_) => "no_antiderivative",
            Error::NotALine(_) => "not_a_line",
            Error::FileNotFound(_) => "file_not_found",
            Error::ParseError { .. } => "parse_error",
            Error::ValidationError(_) => "validation_error",
            Error::Located { source, .. } => source.code(),
        }
    }

    /// Input errors (bad files, bad syntax, bad shapes) as opposed to
    /// mathematical failures.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::SyntaxError { .. }
            | Error::UnknownIdentifier(_)
            | Error::UnknownVariable(_)
            | Error::InvalidContext(_)
            | Error::FileNotFound(_)
            | Error::ParseError { .. }
            | Error::ValidationError(_)
            | Error::LengthMismatch { .. }
            | Error::ArityMismatch { .. }
            | Error::MissingImage(_)
            | Error::IncompleteBindings(_) => true,
            Error::Located { source, .. } => source.is_input_error(),
            _ => false,
        }
    }

    pub(crate) fn at(self, location: impl Into<String>) -> Error {
        Error::Located {
            location: location.into(),
            source: Box::new(self),
        }
    }
}
