//! Program transformations: the order conjugation onto `(0, 1)`, the
//! universal machine and transfinite iteration.

mod conj;
mod iterate;
mod unit;
mod universal;

use crate::codec::CodecError;
use crate::lang::LangError;
use crate::number::Rational;
use crate::ordinal::Ordinal;

pub use conj::{conj_apply, ConjugationMap, Direction};
pub use iterate::{iterate, iterate_prefix, IterationOutcome};
pub use unit::{to_unit_interval, Layout, Mode};
pub use universal::universal_run;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("{0} is outside the open unit interval")]
    OutOfDomain(Rational),
    #[error("cannot decode program: {0}")]
    Decode(#[from] LangError),
    #[error("codec: {0}")]
    Codec(#[from] CodecError),
    #[error("the step at stage {0} did not halt")]
    StepDiverged(Ordinal),
    #[error("iterates at limit {0} are not eventually constant")]
    NonPeriodicResult(Ordinal),
    #[error("the order code does not describe the requested ordinal")]
    CodeMismatch,
}
