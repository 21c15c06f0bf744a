//! Exact rational arithmetic and rational functions over register variables.

mod poly;
mod rational;
mod ratfun;

pub use poly::{Monomial, Poly};
pub use rational::{rat_arith, rat_cmp, ArithOp, Rational};
pub use ratfun::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumberError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator polynomial is zero")]
    ZeroDenominatorPoly,
    #[error("function needs {needed} arguments, got {given}")]
    Arity { needed: usize, given: usize },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Evaluates `f` at `args`; a zero denominator is `DivisionByZero`.
pub fn eval_ratfun(f: &RationalFunction, args: &[Rational]) -> Result<Rational, NumberError> {
    f.eval(args)
}

pub fn compose_ratfun(
    outer: &RationalFunction,
    substitutions: &[RationalFunction],
) -> Result<RationalFunction, NumberError> {
    outer.compose(substitutions)
}
