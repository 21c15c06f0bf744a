use std::fmt;

use super::{Ext, Snapshot};
use crate::ordinal::Ordinal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    Step,
    Limit,
    Accel,
    Crash,
    Halt,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Event::Step => "step",
            Event::Limit => "limit",
            Event::Accel => "accel",
            Event::Crash => "crash",
            Event::Halt => "halt",
        })
    }
}

/// Componentwise infimum of every configuration since the previous record,
/// this one included. `NegInf` stands for "no exact bound known".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Floor {
    pub registers: Vec<Ext>,
    pub pc: usize,
}

impl Floor {
    pub fn of(s: &Snapshot) -> Self {
        Floor { registers: s.registers.iter().cloned().map(Ext::Finite).collect(), pc: s.pc }
    }

    pub fn meet(&mut self, other: &Floor) {
        self.pc = self.pc.min(other.pc);
        for (a, b) in self.registers.iter_mut().zip(&other.registers) {
            if *b < *a {
                *a = b.clone();
            }
        }
    }

    /// True when every bound is at least the matching component of `s`.
    pub fn dominates(&self, s: &Snapshot) -> bool {
        self.pc >= s.pc
            && self.registers.iter().zip(&s.registers).all(|(f, r)| match f {
                Ext::Finite(v) => v >= r,
                Ext::PosInf => true,
                Ext::NegInf => false,
            })
    }
}

/// One retained stage of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub stage: Ordinal,
    pub snapshot: Snapshot,
    pub event: Event,
    pub floor: Floor,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "event={}\tstage={}\tpc={}\tregs=[", self.event, self.stage, self.snapshot.pc)?;
        for (i, r) in self.snapshot.registers.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}
