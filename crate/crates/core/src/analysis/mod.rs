//! Divergence and halting analysis.

mod decider;
mod itrm;
mod replay;
mod strong_loop;

use crate::codec::CodecError;
use crate::lang::LangError;
use crate::ordinal::Ordinal;
use crate::transforms::TransformError;

pub use decider::{halting_decider, Decision};
pub use itrm::{compile_itrm, ItrmError, ItrmOp, ItrmProgram};
pub use replay::{strong_looping_time, verify_loop_replay};
pub use strong_loop::{detect_strong_loop, LoopWitness, StrongLoopDetector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("replay disagrees with the witness at stage {0}")]
    ReplayMismatch(Ordinal),
    #[error("the program halts at stage {0}")]
    Halts(Ordinal),
    #[error("no strong loop within the budget")]
    NotFoundWithinBudget,
    #[error("budget exhausted before the decider resolved")]
    BudgetExhausted,
    #[error("run ended with: {0}")]
    Run(String),
    #[error(transparent)]
    Decode(#[from] LangError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}
