//! The on-disk program corpus, seeded random programs and a plain
//! finite-time interpreter that shares nothing with the engine.

use std::fs;
use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tbss_core::lang::{parse_program, Expr, Instruction, Program};
use tbss_core::number::Rational;

pub fn load() -> Vec<(String, Program)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut out: Vec<(String, Program)> = fs::read_dir(&dir)
        .expect("corpus directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "bss"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let src = fs::read_to_string(&p).unwrap();
            let prog = parse_program(&src).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, prog)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(-4i64..=6);
    let d = [1i64, 1, 1, 2, 3, 4][rng.gen_range(0..6)];
    Rational::new(n, d).unwrap()
}

fn expr(rng: &mut ChaCha8Rng, regs: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.35) {
        return if rng.gen_bool(0.6) { Expr::reg(rng.gen_range(0..regs)) } else { Expr::Const(small(rng)) };
    }
    let a = expr(rng, regs, depth - 1);
    let b = expr(rng, regs, depth - 1);
    match rng.gen_range(0..10) {
        0..=3 => Expr::add(a, b),
        4..=6 => Expr::sub(a, b),
        7..=8 => Expr::mul(a, b),
        _ => Expr::div(a, b),
    }
}

/// A random program of 2 to 8 lines over 1 to 4 registers.
pub fn random_program(rng: &mut ChaCha8Rng) -> Program {
    let regs = rng.gen_range(1..=4);
    let len = rng.gen_range(2..=8);
    let ins = (0..len)
        .map(|pc| match rng.gen_range(0..10) {
            0..=5 => Instruction::compute(rng.gen_range(0..regs), expr(rng, regs, 2)),
            6..=8 => {
                let target = |rng: &mut ChaCha8Rng| {
                    if rng.gen_bool(0.6) { rng.gen_range(pc + 1..=len) } else { rng.gen_range(0..=len) }
                };
                let (le, gt) = (target(rng), target(rng));
                Instruction::branch(rng.gen_range(0..regs), rng.gen_range(0..regs), le, gt)
            }
            _ => Instruction::Halt,
        })
        .collect();
    Program::new(regs, ins).unwrap()
}

#[derive(Debug, PartialEq, Eq)]
pub enum Plain {
    Halted { steps: u64, output: Rational },
    Crashed,
    Running,
    Exploded,
}

fn eval(e: &Expr, regs: &[Rational]) -> Option<Rational> {
    Some(match e {
        Expr::Const(c) => c.clone(),
        Expr::Reg(i) => regs[*i].clone(),
        Expr::Neg(a) => -eval(a, regs)?,
        Expr::Add(a, b) => eval(a, regs)? + eval(b, regs)?,
        Expr::Sub(a, b) => eval(a, regs)? - eval(b, regs)?,
        Expr::Mul(a, b) => eval(a, regs)? * eval(b, regs)?,
        Expr::Div(a, b) => {
            let d = eval(b, regs)?;
            if d.is_zero() {
                return None;
            }
            eval(a, regs)?.checked_div(&d).ok()?
        }
    })
}

/// Runs for at most `limit` steps, giving up once a value needs more than
/// `max_bits` bits.
pub fn plain_run(p: &Program, inputs: &[Rational], limit: u64, max_bits: u64) -> Plain {
    let mut regs = vec![Rational::zero(); p.registers()];
    regs[..inputs.len()].clone_from_slice(inputs);
    let mut pc = 0;
    for steps in 0..=limit {
        match p.instructions().get(pc) {
            None | Some(Instruction::Halt) => return Plain::Halted { steps, output: regs[0].clone() },
            Some(Instruction::Compute { target, expr }) => {
                let Some(v) = eval(expr, &regs) else { return Plain::Crashed };
                if v.numer().bits() + v.denom().bits() > max_bits {
                    return Plain::Exploded;
                }
                regs[*target] = v;
                pc += 1;
            }
            Some(Instruction::Branch { left, right, if_le, if_gt }) => {
                pc = if regs[*left] <= regs[*right] { *if_le } else { *if_gt };
            }
        }
    }
    Plain::Running
}

/// Repeats `p` until a fresh counter register exceeds `rounds`.
pub fn with_counter(p: &Program, rounds: i64) -> Program {
    let len = p.len();
    let c = p.registers();
    let mut ins: Vec<Instruction> = p
        .instructions()
        .iter()
        .map(|i| match i {
            Instruction::Halt => Instruction::goto(len),
            other => other.clone(),
        })
        .collect();
    ins.push(Instruction::compute(c, Expr::add(Expr::reg(c), Expr::constant(Rational::one()))));
    ins.push(Instruction::compute(c + 1, Expr::constant(Rational::from_int(rounds))));
    ins.push(Instruction::branch(c, c + 1, 0, len + 3));
    Program::new(c + 2, ins).unwrap()
}

/// `n` random programs that halt from zero inputs within `limit` steps.
pub fn halting_programs(rng: &mut ChaCha8Rng, n: usize, limit: u64) -> Vec<(Program, u64, Rational)> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut p = random_program(rng);
        if rng.gen_bool(0.4) {
            p = with_counter(&p, rng.gen_range(1..400));
        }
        if let Plain::Halted { steps, output } = plain_run(&p, &[], limit, 4096) {
            out.push((p, steps, output));
        }
    }
    out
}
