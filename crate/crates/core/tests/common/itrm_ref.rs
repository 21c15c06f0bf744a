//! Standalone transfinite ITRM interpreter used as an oracle.
//!
//! Limits are estimated from a finite window: a segment of length `w^L` is
//! approximated by `BLOCKS` sub-segments (or `STEPS` steps when `L = 1`).
//! A register's liminf is the minimum over the last quarter of the window
//! when that minimum already occurred in the quarter before, and 0 when
//! the quarter minima still grow.

use tbss_core::analysis::{ItrmOp, ItrmProgram};
use tbss_core::ordinal::Ordinal;

const STEPS: usize = 512;
const BLOCKS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub regs: Vec<u64>,
    pub pc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefOutcome {
    /// Halting stage as `[n, c1, c2, ...]` coefficients, and the final state.
    Halted(Vec<u64>, State),
    Stuck,
}

enum Seg {
    Halt(Vec<u64>, State),
    Limit(State, State),
    Stuck,
}

fn min_state(states: &[State]) -> State {
    let n = states[0].regs.len();
    State {
        regs: (0..n).map(|i| states.iter().map(|s| s.regs[i]).min().unwrap()).collect(),
        pc: states.iter().map(|s| s.pc).min().unwrap(),
    }
}

/// Liminf of a sequence of per-segment minima.
fn limit_of(mins: &[State]) -> State {
    let len = mins.len();
    let (a, b) = (&mins[len / 2..3 * len / 4], &mins[3 * len / 4..]);
    let (ma, mb) = (min_state(a), min_state(b));
    State {
        regs: ma.regs.iter().zip(&mb.regs).map(|(x, y)| if x == y { *x } else { 0 }).collect(),
        pc: ma.pc.min(mb.pc),
    }
}

fn step(q: &ItrmProgram, s: &State) -> Option<State> {
    let mut t = s.clone();
    match q.ops.get(s.pc).copied().unwrap_or(ItrmOp::Halt) {
        ItrmOp::Halt => return None,
        ItrmOp::Inc(r) => t.regs[r] += 1,
        ItrmOp::Dec(r) => t.regs[r] = t.regs[r].checked_sub(1)?,
        ItrmOp::Zero(r) => t.regs[r] = 0,
        ItrmOp::Copy(a, b) => t.regs[b] = t.regs[a],
        ItrmOp::JumpZero(r, target) if s.regs[r] == 0 => {
            t.pc = target;
            return Some(t);
        }
        ItrmOp::JumpZero(..) => {}
    }
    t.pc += 1;
    Some(t)
}

fn is_halt(q: &ItrmProgram, s: &State) -> bool {
    matches!(q.ops.get(s.pc), None | Some(ItrmOp::Halt))
}

/// Runs a segment of length `w^level` from `s`. On a limit, returns the
/// limit state and the minimum over all states of the segment.
fn segment(q: &ItrmProgram, s: State, level: usize) -> Seg {
    let mut mins = Vec::new();
    let mut cur = s;
    if level == 1 {
        for n in 0..STEPS {
            if is_halt(q, &cur) {
                return Seg::Halt(vec![n as u64], cur);
            }
            mins.push(cur.clone());
            match step(q, &cur) {
                Some(t) => cur = t,
                None => return Seg::Stuck,
            }
        }
    } else {
        for j in 0..BLOCKS {
            match segment(q, cur, level - 1) {
                Seg::Halt(mut c, st) => {
                    c.resize(level, 0);
                    c[level - 1] += j as u64;
                    return Seg::Halt(c, st);
                }
                Seg::Limit(next, m) => {
                    mins.push(m);
                    cur = next;
                }
                Seg::Stuck => return Seg::Stuck,
            }
        }
    }
    let whole = min_state(&mins);
    Seg::Limit(limit_of(&mins), whole)
}

pub fn run_itrm(q: &ItrmProgram, levels: usize) -> RefOutcome {
    let s = State { regs: vec![0; q.registers], pc: 0 };
    match segment(q, s, levels + 1) {
        Seg::Halt(c, st) => RefOutcome::Halted(c, st),
        _ => RefOutcome::Stuck,
    }
}

/// The state at stage `w` when the run gets there.
pub fn state_at_omega(q: &ItrmProgram) -> Option<State> {
    let s = State { regs: vec![0; q.registers], pc: 0 };
    match segment(q, s, 1) {
        Seg::Limit(l, _) => Some(l),
        _ => None,
    }
}

pub fn stage_of(c: &[u64]) -> Ordinal {
    Ordinal::from_coeffs(c)
}
