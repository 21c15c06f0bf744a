use crate::engine::{run_with, RunConfig, RunResult};
use crate::lang::decode_program;
use crate::number::Rational;

use super::TransformError;

/// Decodes `code` into a program and runs it on `inputs`.
pub fn universal_run(code: &Rational, inputs: &[Rational], cfg: &RunConfig) -> Result<RunResult, TransformError> {
    let p = decode_program(code)?;
    Ok(run_with(&p, inputs, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Restriction, Variant};
    use crate::lang::{encode_program, parse_program};
    use crate::ordinal::Ordinal;

    #[test]
    fn matches_direct_run() {
        let p = parse_program("registers 1\n0: if R1 <= R1 goto 0 else goto 0\n").unwrap();
        let cfg = RunConfig::new(Variant::Sitbm).budget(Ordinal::omega_pow(2));
        let u = universal_run(&encode_program(&p), &[], &cfg).unwrap();
        let d = run(&p, &[], Variant::Sitbm, Ordinal::omega_pow(2), Restriction::Rationals, 3);
        assert_eq!(u.verdict, d.verdict);
    }

    #[test]
    fn zero_is_not_a_program() {
        let cfg = RunConfig::new(Variant::Itbm);
        assert!(matches!(universal_run(&Rational::zero(), &[], &cfg), Err(TransformError::Decode(_))));
    }
}
