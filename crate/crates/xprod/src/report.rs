//! JSON renderings of core results.

use serde_json::{json, Map, Value};
use xprod_core::{Error, Report, Scalar, TensorMap, Witness};

pub fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn matrix(m: &TensorMap) -> Value {
    Value::Array(m.to_rows().iter().map(|r| scalars(r)).collect())
}

pub fn witness(w: &Witness) -> Value {
    json!({
        "indices": w.indices,
        "identity": w.identity,
        "lhs": scalars(&w.lhs),
        "rhs": scalars(&w.rhs),
    })
}

/// One entry per condition, in report order.
pub fn conditions(r: &Report) -> Value {
    Value::Array(
        r.conditions
            .iter()
            .map(|c| {
                let mut o = Map::new();
                o.insert("label".into(), Value::String(c.label.into()));
                o.insert("pass".into(), Value::Bool(c.passed()));
                if let Some(w) = &c.witness {
                    o.insert("witness".into(), witness(w));
                }
                Value::Object(o)
            })
            .collect(),
    )
}

/// Stable kind name for each core error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPrime(_) => "not-prime",
        Error::ScalarParse { .. } => "scalar-parse",
        Error::FieldMismatch => "field-mismatch",
        Error::ShapeMismatch { .. } => "shape-mismatch",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::EmptyShape => "empty-shape",
        Error::NotAssociative(_) => "not-associative",
        Error::NotUnital(_) => "not-unital",
        Error::ZeroUnit => "zero-unit",
        Error::NotCoassociative(_) => "not-coassociative",
        Error::CounitFail(_) => "counit-fail",
        Error::UnitNotGrouplike(_) => "unit-not-grouplike",
        Error::AxiomFailure(_) => "axiom-failure",
        Error::UnitMismatch => "unit-mismatch",
        Error::NotAlgebraMap { .. } => "not-algebra-map",
        Error::SplitFail { .. } => "split-fail",
        Error::RoundTripMismatch(_) => "round-trip-mismatch",
        Error::PremiseFail { .. } => "premise-fail",
        Error::NotAlgebraMapResult(_) => "not-algebra-map-result",
        Error::SearchSpaceTooLarge { .. } => "search-space-too-large",
        Error::Precondition(_) => "precondition",
        Error::Singular => "singular",
    }
}

/// Failures of the mathematics, as opposed to malformed input.
pub fn is_axiom_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NotAssociative(_)
            | Error::NotUnital(_)
            | Error::NotCoassociative(_)
            | Error::CounitFail(_)
            | Error::UnitNotGrouplike(_)
            | Error::AxiomFailure(_)
            | Error::UnitMismatch
            | Error::NotAlgebraMap { .. }
            | Error::SplitFail { .. }
            | Error::RoundTripMismatch(_)
            | Error::PremiseFail { .. }
            | Error::NotAlgebraMapResult(_)
    )
}

pub fn error(e: &Error) -> Value {
    let mut o = Map::new();
    o.insert("kind".into(), Value::String(error_kind(e).into()));
    o.insert("message".into(), Value::String(e.to_string()));
    let which = match e {
        Error::NotAlgebraMap { which, .. } | Error::SplitFail { which, .. } | Error::PremiseFail { which, .. } => {
            Some(*which)
        }
        _ => None,
    };
    if let Some(which) = which {
        o.insert("which".into(), Value::String(which.into()));
    }
    let w = match e {
        Error::NotAssociative(w)
        | Error::NotUnital(w)
        | Error::NotCoassociative(w)
        | Error::CounitFail(w)
        | Error::UnitNotGrouplike(w)
        | Error::NotAlgebraMapResult(w) => Some(w),
        Error::NotAlgebraMap { witness, .. }
        | Error::SplitFail { witness, .. }
        | Error::PremiseFail { witness, .. } => Some(witness),
        _ => None,
    };
    if let Some(w) = w {
        o.insert("witness".into(), witness(w));
    }
    if let Error::AxiomFailure(r) = e {
        o.insert("conditions".into(), conditions(r));
    }
    Value::Object(o)
}
