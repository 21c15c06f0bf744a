//! Goedel numbering of programs as rationals.
//!
//! Programs serialize to a self-delimiting bit stream which is then packed
//! into the odd digits of a rational by [`crate::codec::seq_to_real`]:
//!
//! * natural `v`: `len` one-bits, a zero, then `len` bits of `v` big-endian;
//! * integer: sign bit, then natural magnitude;
//! * program: marker `1`, register count, instruction count, instructions;
//! * instruction tag: `00` compute, `01` branch, `10` halt;
//! * expression tag (3 bits): const, reg, add, sub, mul, div, neg.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use super::{Expr, Instruction, LangError, Program};
use crate::codec::{real_to_seq, seq_to_real, Bits};
use crate::number::Rational;

const MAX_FIELD_BITS: usize = 1 << 16;

#[derive(Default)]
struct Writer(Vec<bool>);

impl Writer {
    fn bit(&mut self, b: bool) {
        self.0.push(b);
    }

    fn bits(&mut self, v: u64, width: usize) {
        for k in (0..width).rev() {
            self.bit((v >> k) & 1 == 1);
        }
    }

    fn natural(&mut self, v: &BigUint) {
        let len = v.bits() as usize;
        for _ in 0..len {
            self.bit(true);
        }
        self.bit(false);
        for k in (0..len).rev() {
            self.bit(v.bit(k as u64));
        }
    }

    fn small(&mut self, v: usize) {
        self.natural(&BigUint::from(v));
    }

    fn integer(&mut self, v: &BigInt) {
        self.bit(v.sign() == Sign::Minus);
        self.natural(v.magnitude());
    }

    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::Const(c) => {
                self.bits(0, 3);
                self.integer(c.numer());
                self.natural(c.denom().magnitude());
            }
            Expr::Reg(i) => {
                self.bits(1, 3);
                self.small(*i);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let tag = match e {
                    Expr::Add(..) => 2,
                    Expr::Sub(..) => 3,
                    Expr::Mul(..) => 4,
                    _ => 5,
                };
                self.bits(tag, 3);
                self.expr(a);
                self.expr(b);
            }
            Expr::Neg(a) => {
                self.bits(6, 3);
                self.expr(a);
            }
        }
    }
}

struct Reader<'a> {
    bits: &'a Bits,
    pos: usize,
}

impl Reader<'_> {
    fn bit(&mut self) -> bool {
        let b = self.bits.get(self.pos);
        self.pos += 1;
        b
    }

    fn bits(&mut self, width: usize) -> u64 {
        (0..width).fold(0, |acc, _| (acc << 1) | self.bit() as u64)
    }

    fn natural(&mut self) -> Result<BigUint, LangError> {
        let mut len = 0;
        while self.bit() {
            len += 1;
            if len > MAX_FIELD_BITS {
                return Err(LangError::Decode("length prefix too long".into()));
            }
        }
        let mut v = BigUint::zero();
        for _ in 0..len {
            v = (v << 1u32) | BigUint::from(self.bit() as u8);
        }
        Ok(v)
    }

    fn small(&mut self) -> Result<usize, LangError> {
        self.natural()?
            .to_usize()
            .filter(|v| *v < MAX_FIELD_BITS)
            .ok_or_else(|| LangError::Decode("index too large".into()))
    }

    fn integer(&mut self) -> Result<BigInt, LangError> {
        let negative = self.bit();
        let mag = self.natural()?;
        Ok(BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, mag))
    }

    fn expr(&mut self, depth: usize) -> Result<Expr, LangError> {
        if depth > 256 {
            return Err(LangError::Decode("expression nested too deeply".into()));
        }
        Ok(match self.bits(3) {
            0 => {
                let num = self.integer()?;
                let den = self.natural()?;
                let c = Rational::new(num, BigInt::from(den)).map_err(|_| LangError::Decode("zero denominator literal".into()))?;
                Expr::Const(c)
            }
            1 => Expr::Reg(self.small()?),
            6 => Expr::neg(self.expr(depth + 1)?),
            tag @ 2..=5 => {
                let a = self.expr(depth + 1)?;
                let b = self.expr(depth + 1)?;
                match tag {
                    2 => Expr::add(a, b),
                    3 => Expr::sub(a, b),
                    4 => Expr::mul(a, b),
                    _ => Expr::div(a, b),
                }
            }
            t => return Err(LangError::Decode(format!("unknown expression tag {t}"))),
        })
    }
}

pub fn program_bits(p: &Program) -> Bits {
    let mut w = Writer::default();
    w.bit(true);
    w.small(p.registers());
    w.small(p.len());
    for ins in p.instructions() {
        match ins {
            Instruction::Compute { target, expr } => {
                w.bits(0, 2);
                w.small(*target);
                w.expr(expr);
            }
            Instruction::Branch { left, right, if_le, if_gt } => {
                w.bits(1, 2);
                w.small(*left);
                w.small(*right);
                w.small(*if_le);
                w.small(*if_gt);
            }
            Instruction::Halt => w.bits(2, 2),
        }
    }
    Bits::finite(w.0)
}

pub fn encode_program(p: &Program) -> Rational {
    seq_to_real(&program_bits(p))
}

pub fn decode_bits(bits: &Bits) -> Result<Program, LangError> {
    let mut r = Reader { bits, pos: 0 };
    if !r.bit() {
        return Err(LangError::Decode("missing program marker".into()));
    }
    let registers = r.small()?;
    let count = r.small()?;
    let mut instructions = Vec::with_capacity(count.min(1024));
    for _ in 0..count {
        let ins = match r.bits(2) {
            0 => Instruction::Compute { target: r.small()?, expr: r.expr(0)? },
            1 => Instruction::Branch { left: r.small()?, right: r.small()?, if_le: r.small()?, if_gt: r.small()? },
            2 => Instruction::Halt,
            t => return Err(LangError::Decode(format!("unknown instruction tag {t}"))),
        };
        instructions.push(ins);
    }
    if !bits.is_finite() || bits.prefix().len() > r.pos {
        return Err(LangError::Decode("trailing bits after program".into()));
    }
    Program::new(registers, instructions).map_err(|e| LangError::Decode(e.to_string()))
}

pub fn decode_program(code: &Rational) -> Result<Program, LangError> {
    let bits = real_to_seq(code).map_err(|e| LangError::Decode(e.to_string()))?;
    decode_bits(&bits)
}
