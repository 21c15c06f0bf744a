use std::fmt;
use std::str::FromStr;

use crate::lang::{Expr, Instruction, Program};
use crate::number::Rational;

/// One instruction of an infinite-time register machine over the naturals.
/// Registers are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ItrmOp {
    Inc(usize),
    /// Decrement; undefined on 0.
    Dec(usize),
    Zero(usize),
    /// `Copy(from, to)`.
    Copy(usize, usize),
    /// Jump to the target when the register holds 0, else fall through.
    JumpZero(usize, usize),
    Halt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ItrmProgram {
    pub registers: usize,
    pub ops: Vec<ItrmOp>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ItrmError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("register R{0} out of range")]
    Register(usize),
    #[error("jump target {0} out of range")]
    Target(usize),
}

impl ItrmProgram {
    pub fn new(registers: usize, ops: Vec<ItrmOp>) -> Result<Self, ItrmError> {
        let reg = |r: usize| if r < registers { Ok(()) } else { Err(ItrmError::Register(r + 1)) };
        for op in &ops {
            match *op {
                ItrmOp::Inc(r) | ItrmOp::Dec(r) | ItrmOp::Zero(r) => reg(r)?,
                ItrmOp::Copy(a, b) => {
                    reg(a)?;
                    reg(b)?
                }
                ItrmOp::JumpZero(r, t) => {
                    reg(r)?;
                    if t > ops.len() {
                        return Err(ItrmError::Target(t));
                    }
                }
                ItrmOp::Halt => {}
            }
        }
        Ok(ItrmProgram { registers, ops })
    }
}

/// Translates `q` one instruction per instruction, with an extra register
/// holding 0 for the zero tests. Run it under the naturals restriction.
pub fn compile_itrm(q: &ItrmProgram) -> Program {
    let zero = q.registers;
    let one = || Expr::Const(Rational::one());
    let ins = q
        .ops
        .iter()
        .enumerate()
        .map(|(pc, op)| match *op {
            ItrmOp::Inc(r) => Instruction::compute(r, Expr::add(Expr::Reg(r), one())),
            ItrmOp::Dec(r) => Instruction::compute(r, Expr::sub(Expr::Reg(r), one())),
            ItrmOp::Zero(r) => Instruction::compute(r, Expr::Const(Rational::zero())),
            ItrmOp::Copy(a, b) => Instruction::compute(b, Expr::Reg(a)),
            ItrmOp::JumpZero(r, t) => Instruction::branch(r, zero, t, pc + 1),
            ItrmOp::Halt => Instruction::Halt,
        })
        .collect();
    Program::new(q.registers + 1, ins).expect("translation of a well-formed program")
}

impl fmt::Display for ItrmOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ItrmOp::Inc(r) => write!(f, "inc R{}", r + 1),
            ItrmOp::Dec(r) => write!(f, "dec R{}", r + 1),
            ItrmOp::Zero(r) => write!(f, "zero R{}", r + 1),
            ItrmOp::Copy(a, b) => write!(f, "copy R{} R{}", a + 1, b + 1),
            ItrmOp::JumpZero(r, t) => write!(f, "jz R{} {t}", r + 1),
            ItrmOp::Halt => write!(f, "halt"),
        }
    }
}

impl fmt::Display for ItrmProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "registers {}", self.registers)?;
        for (i, op) in self.ops.iter().enumerate() {
            writeln!(f, "{i}: {op}")?;
        }
        Ok(())
    }
}

fn parse_reg(tok: Option<&str>, line: usize) -> Result<usize, ItrmError> {
    let bad = || ItrmError::Syntax { line, msg: format!("expected a register, found {tok:?}") };
    let t = tok.ok_or_else(bad)?;
    let n: usize = t.strip_prefix('R').or_else(|| t.strip_prefix('r')).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    n.checked_sub(1).ok_or_else(bad)
}

impl FromStr for ItrmProgram {
    type Err = ItrmError;

    /// Text form: a `registers N` header, then one `[label:] op` per line;
    /// `#` starts a comment.
    fn from_str(src: &str) -> Result<Self, ItrmError> {
        let mut registers = None;
        let mut ops = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let body = match text.split_once(':') {
                Some((label, rest)) if label.trim().parse::<usize>().is_ok() => rest.trim(),
                _ => text,
            };
            let mut toks = body.split_whitespace();
            let op = match toks.next() {
                Some("registers") => {
                    let n = toks.next().and_then(|t| t.parse().ok());
                    registers = Some(n.ok_or(ItrmError::Syntax { line, msg: "bad register count".into() })?);
                    continue;
                }
                Some("inc") => ItrmOp::Inc(parse_reg(toks.next(), line)?),
                Some("dec") => ItrmOp::Dec(parse_reg(toks.next(), line)?),
                Some("zero") => ItrmOp::Zero(parse_reg(toks.next(), line)?),
                Some("copy") => ItrmOp::Copy(parse_reg(toks.next(), line)?, parse_reg(toks.next(), line)?),
                Some("jz") => {
                    let r = parse_reg(toks.next(), line)?;
                    let t = toks.next().and_then(|t| t.parse().ok());
                    ItrmOp::JumpZero(r, t.ok_or(ItrmError::Syntax { line, msg: "bad jump target".into() })?)
                }
                Some("halt") => ItrmOp::Halt,
                other => return Err(ItrmError::Syntax { line, msg: format!("unknown instruction {other:?}") }),
            };
            if toks.next().is_some() {
                return Err(ItrmError::Syntax { line, msg: "trailing tokens".into() });
            }
            ops.push(op);
        }
        let registers = registers.ok_or(ItrmError::Syntax { line: 0, msg: "missing `registers` header".into() })?;
        ItrmProgram::new(registers, ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let src = "registers 2\n0: inc R1\n1: jz R2 3\n2: copy R1 R2\n3: halt\n";
        let q: ItrmProgram = src.parse().unwrap();
        assert_eq!(q.to_string(), src);
        assert_eq!(compile_itrm(&q).len(), 4);
    }

    #[test]
    fn rejects_bad_targets() {
        assert_eq!("registers 1\njz R1 9\n".parse::<ItrmProgram>(), Err(ItrmError::Target(9)));
    }
}
