//! Transfinite execution: successor steps, limit stages and run verdicts.

mod accel;
mod limits;
mod nested;
mod run;
mod tail;
mod trace;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::lang::{Instruction, Program};
use crate::number::{NumberError, Rational};
use crate::ordinal::Ordinal;

pub use accel::{accelerate, Acceleration, Cycle};
pub use limits::{apply_limit_rule, limit_sets, limit_value, Ext, InfFlag, LimitSetDescriptor};
pub use run::{run, run_with, RunConfig, RunResult, TraceLevel};
pub use tail::{OffsetTail, Shape};
pub use trace::{Event, Floor, TraceRecord};

/// Machine configuration at one stage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Snapshot {
    pub registers: Vec<Rational>,
    pub pc: usize,
}

impl Snapshot {
    /// Initial snapshot: inputs in `R1..`, remaining registers zero.
    pub fn initial(registers: usize, inputs: &[Rational]) -> Self {
        let mut regs = vec![Rational::zero(); registers];
        for (slot, v) in regs.iter_mut().zip(inputs) {
            *slot = v.clone();
        }
        Snapshot { registers: regs, pc: 0 }
    }

    /// Componentwise `self <= other`, pc included.
    pub fn le(&self, other: &Snapshot) -> bool {
        self.pc <= other.pc && self.registers.iter().zip(&other.registers).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pc={} [", self.pc)?;
        for (i, r) in self.registers.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// Register limit rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Itbm,
    Witbm,
    Sitbm,
    Bsitbm,
    Ssitbm,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Itbm, Variant::Witbm, Variant::Sitbm, Variant::Bsitbm, Variant::Ssitbm];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Itbm => "itbm",
            Variant::Witbm => "witbm",
            Variant::Sitbm => "sitbm",
            Variant::Bsitbm => "bsitbm",
            Variant::Ssitbm => "ssitbm",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown variant `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrashReason {
    DivisionByZero,
    UndefinedLimit,
    EmptyStrongLimitSet,
    RestrictionViolated,
}

impl fmt::Display for CrashReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrashReason::DivisionByZero => "division by zero",
            CrashReason::UndefinedLimit => "undefined limit",
            CrashReason::EmptyStrongLimitSet => "empty strong limit set",
            CrashReason::RestrictionViolated => "restriction violated",
        })
    }
}

/// Value domain every register must stay in.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Restriction {
    #[default]
    Rationals,
    Integers,
    Naturals,
    Dyadics,
    Finite(BTreeSet<Rational>),
}

impl Restriction {
    pub fn allows(&self, x: &Rational) -> bool {
        match self {
            Restriction::Rationals => true,
            Restriction::Integers => x.is_integer(),
            Restriction::Naturals => x.is_integer() && !x.is_negative(),
            Restriction::Dyadics => x.is_dyadic(),
            Restriction::Finite(set) => set.contains(x),
        }
    }

    pub fn allows_all(&self, xs: &[Rational]) -> bool {
        matches!(self, Restriction::Rationals) || xs.iter().all(|x| self.allows(x))
    }
}

impl FromStr for Restriction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rationals" => Ok(Restriction::Rationals),
            "integers" => Ok(Restriction::Integers),
            "naturals" => Ok(Restriction::Naturals),
            "dyadics" => Ok(Restriction::Dyadics),
            _ => {
                let list = s.strip_prefix("set:").ok_or_else(|| format!("unknown restriction `{s}`"))?;
                list.split(',')
                    .map(|v| v.trim().parse::<Rational>().map_err(|e| e.to_string()))
                    .collect::<Result<BTreeSet<_>, _>>()
                    .map(Restriction::Finite)
            }
        }
    }
}

/// Result of one successor step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Next(Snapshot),
    Halt(Rational),
    Crash(CrashReason),
}

/// Whether the snapshot sits on a halting line.
pub fn is_halting(p: &Program, s: &Snapshot) -> bool {
    matches!(p.get(s.pc), None | Some(Instruction::Halt))
}

/// One successor step.
pub fn step(p: &Program, s: &Snapshot) -> StepOutcome {
    match p.get(s.pc) {
        None | Some(Instruction::Halt) => StepOutcome::Halt(s.registers[0].clone()),
        Some(Instruction::Compute { target, expr }) => match expr.eval(&s.registers) {
            Ok(v) => {
                let mut registers = s.registers.clone();
                registers[*target] = v;
                StepOutcome::Next(Snapshot { registers, pc: s.pc + 1 })
            }
            Err(NumberError::DivisionByZero) => StepOutcome::Crash(CrashReason::DivisionByZero),
            Err(e) => panic!("validated program failed to evaluate: {e}"),
        },
        Some(Instruction::Branch { left, right, if_le, if_gt }) => {
            let pc = if s.registers[*left] <= s.registers[*right] { *if_le } else { *if_gt };
            StepOutcome::Next(Snapshot { registers: s.registers.clone(), pc })
        }
    }
}

/// Final outcome of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Halted { stage: Ordinal, output: Rational },
    Diverged { loop_start: Ordinal, loop_end: Ordinal },
    Crashed { stage: Ordinal, reason: CrashReason },
    BudgetExhausted { stage: Ordinal, snapshot: Snapshot },
    Unresolved { stage: Ordinal, register: Option<usize> },
}

impl Verdict {
    pub fn stage(&self) -> &Ordinal {
        match self {
            Verdict::Halted { stage, .. }
            | Verdict::Crashed { stage, .. }
            | Verdict::BudgetExhausted { stage, .. }
            | Verdict::Unresolved { stage, .. } => stage,
            Verdict::Diverged { loop_end, .. } => loop_end,
        }
    }

    pub fn output(&self) -> Option<&Rational> {
        match self {
            Verdict::Halted { output, .. } => Some(output),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Halted { stage, output } => write!(f, "halted at {stage}, output {output}"),
            Verdict::Diverged { loop_start, loop_end } => write!(f, "diverged, strong loop ({loop_start}, {loop_end})"),
            Verdict::Crashed { stage, reason } => write!(f, "crashed at {stage}: {reason}"),
            Verdict::BudgetExhausted { stage, snapshot } => write!(f, "budget exhausted at {stage}, {snapshot}"),
            Verdict::Unresolved { stage, register: Some(r) } => write!(f, "unresolved at {stage}, register R{}", r + 1),
            Verdict::Unresolved { stage, register: None } => write!(f, "unresolved at {stage}"),
        }
    }
}
