use std::collections::BTreeSet;

use crate::codec::{get_bit, real_to_seq, set_bit};
use crate::engine::{Event, Restriction, RunConfig, Snapshot, TraceLevel, Variant, Verdict};
use crate::number::Rational;
use crate::ordinal::Ordinal;
use crate::transforms::universal_run;

use super::AnalysisError;

/// Answer of [`halting_decider`], printed as the machine's output bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Halts = 0,
    Diverges = 1,
}

/// Numbering of the snapshots of a program with `registers` registers and
/// `lines` instructions whose values lie in `universe`.
struct Numbering<'a> {
    universe: Vec<&'a Rational>,
    registers: usize,
    lines: usize,
}

impl Numbering<'_> {
    fn code(&self, s: &Snapshot) -> usize {
        let base = self.universe.len();
        let regs = s.registers.iter().rev().fold(0, |acc, v| {
            let i = self.universe.binary_search(&v).expect("restriction keeps values in the universe");
            acc * base + i
        });
        regs * (self.lines + 1) + s.pc
    }

    fn snapshot(&self, mut n: usize) -> Snapshot {
        let pc = n % (self.lines + 1);
        n /= self.lines + 1;
        let base = self.universe.len();
        let registers = (0..self.registers)
            .map(|_| {
                let v = self.universe[n % base].clone();
                n /= base;
                v
            })
            .collect();
        Snapshot { registers, pc }
    }
}

/// Decides halting for the program coded by `code` when every register
/// stays inside the finite `universe`.
///
/// Snapshots are numbered and flagged in a tracking real `R`. A snapshot
/// already flagged closes a strong loop. A snapshot that dominates every
/// flagged one is flagged; otherwise `R` is erased first.
pub fn halting_decider(
    code: &Rational,
    universe: &BTreeSet<Rational>,
    budget: Ordinal,
) -> Result<Decision, AnalysisError> {
    let p = crate::lang::decode_program(code)?;
    let cfg = RunConfig::new(Variant::Sitbm)
        .budget(budget)
        .restriction(Restriction::Finite(universe.clone()))
        .trace(TraceLevel::All);
    let res = universal_run(code, &[], &cfg)?;
    let num = Numbering { universe: universe.iter().collect(), registers: p.registers(), lines: p.len() };
    let mut tracker = Rational::zero();
    for rec in &res.trace {
        if !matches!(rec.event, Event::Step | Event::Limit) {
            continue;
        }
        let n = num.code(&rec.snapshot);
        if get_bit(&tracker, n)? {
            return Ok(Decision::Diverges);
        }
        let dominated = real_to_seq(&tracker)?.ones().all(|m| num.snapshot(m).le(&rec.snapshot));
        if !dominated {
            tracker = Rational::zero();
        }
        tracker = set_bit(&tracker, n, true)?;
    }
    match res.verdict {
        Verdict::Halted { .. } => Ok(Decision::Halts),
        Verdict::Diverged { .. } => Ok(Decision::Diverges),
        Verdict::BudgetExhausted { .. } => Err(AnalysisError::BudgetExhausted),
        v => Err(AnalysisError::Run(v.to_string())),
    }
}
