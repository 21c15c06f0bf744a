//! The machine language: instructions, text format and Goedel numbering.

mod expr;
mod godel;
mod parse;
mod program;

pub use expr::Expr;
pub use godel::{decode_bits, decode_program, encode_program, program_bits};
pub use parse::{parse_expr, parse_program};
pub use program::{Instruction, Program};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LangError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid program at instruction {line}: {reason}")]
    Invalid { line: usize, reason: String },
    #[error("cannot decode program: {0}")]
    Decode(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::Rational;

    const COUNTER: &str = "registers 2\n0: R2 := R2 + 1\n1: if R1 <= R1 goto 0 else goto 0\n";

    #[test]
    fn parses_counter() {
        let p = parse_program(COUNTER).unwrap();
        assert_eq!(p.registers(), 2);
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "registers 2\n0: R2 := R2 + 1\n1: goto 0\n");
    }

    #[test]
    fn rejects_out_of_range_jump() {
        let err = parse_program("registers 1\n0: goto 7").unwrap_err();
        assert!(matches!(err, LangError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_out_of_range_register() {
        assert!(parse_program("registers 1\n0: R2 := 1").is_err());
        assert!(parse_program("registers 1\n0: R1 := R3 + 1").is_err());
        assert!(parse_program("registers 1\n1: halt").is_err());
    }

    #[test]
    fn zero_denominator_is_not_a_parse_error() {
        let p = parse_program("registers 2\n0: R1 := 1/(R2 - R2)").unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn comments_and_sugar() {
        let p = parse_program("# clock\nregisters 1 # one\n\n0: goto 1  # skip\n1: halt\n").unwrap();
        assert_eq!(p.instructions()[0], Instruction::goto(1));
    }

    #[test]
    fn print_parse_fixed_point() {
        let src = "registers 3\n0: R1 := -R2 * (1/2) + R3 / (R1 - (-3)) - 0.25\n1: R2 := 1/2\n2: R3 := -(R1 + R2)\n3: halt\n";
        let p = parse_program(src).unwrap();
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn godel_round_trip() {
        let p = parse_program(COUNTER).unwrap();
        assert_eq!(decode_program(&encode_program(&p)).unwrap(), p);
        let h = parse_program("registers 1\n0: halt").unwrap();
        let code = encode_program(&h);
        assert!(code > Rational::zero());
        assert_eq!(decode_program(&code).unwrap(), h);
    }

    #[test]
    fn decode_zero_fails() {
        assert!(matches!(decode_program(&Rational::zero()), Err(LangError::Decode(_))));
        assert!(decode_program(&"1/2".parse().unwrap()).is_err());
    }
}
