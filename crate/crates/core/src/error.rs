use alloc::string::String;

use crate::report::{Report, Witness};

/// Errors raised by constructors, builders and the extraction machinery.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    ScalarParse { text: String, reason: &'static str },
    #[error("scalars or maps live over different fields")]
    FieldMismatch,
    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    ShapeMismatch { context: &'static str, expected: String, found: String },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("empty shape or zero dimension")]
    EmptyShape,
    #[error("multiplication is not associative at basis triple {:?}", .0.indices)]
    NotAssociative(Witness),
    #[error("unit law fails at basis element {:?}", .0.indices)]
    NotUnital(Witness),
    #[error("distinguished element of a pointed space must be nonzero")]
    ZeroUnit,
    #[error("comultiplication is not coassociative at basis element {:?}", .0.indices)]
    NotCoassociative(Witness),
    #[error("counit law fails at basis element {:?}", .0.indices)]
    CounitFail(Witness),
    #[error("distinguished element is not group-like")]
    UnitNotGrouplike(Witness),
    #[error("axioms fail: {}", .0.failing_labels().join(", "))]
    AxiomFailure(Report),
    #[error("unit of the algebra is not 1_A ⊗ 1_V ⊗ 1_C")]
    UnitMismatch,
    #[error("embedding of {which} is not an algebra map")]
    NotAlgebraMap { which: &'static str, witness: Witness },
    #[error("splitting condition {which} fails at {:?}", .witness.indices)]
    SplitFail { which: &'static str, witness: Witness },
    #[error("round trip mismatch: {0}")]
    RoundTripMismatch(String),
    #[error("premise {which} fails at {:?}", .witness.indices)]
    PremiseFail { which: &'static str, witness: Witness },
    #[error("induced map is not an algebra map at {:?}", .0.indices)]
    NotAlgebraMapResult(Witness),
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("singular matrix")]
    Singular,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn shape_mismatch(
    context: &'static str,
    expected: impl core::fmt::Debug,
    found: impl core::fmt::Debug,
) -> Error {
    Error::ShapeMismatch { context, expected: alloc::format!("{expected:?}"), found: alloc::format!("{found:?}") }
}
