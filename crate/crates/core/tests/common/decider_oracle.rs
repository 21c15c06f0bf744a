//! Small programs over the values {0, 1} and a finite-state transfinite
//! simulator for them.

use std::collections::HashMap;

use tbss_core::lang::{parse_program, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    SetZero(usize),
    SetOne(usize),
    Flip(usize),
    /// `if Ri <= Rj goto a`, else fall through.
    JumpLe(usize, usize, usize),
    Goto(usize),
    Halt,
}

pub fn alphabet(registers: usize, lines: usize) -> Vec<Op> {
    let mut v = Vec::new();
    for r in 0..registers {
        v.extend([Op::SetZero(r), Op::SetOne(r), Op::Flip(r)]);
    }
    for a in 0..=lines {
        if registers == 2 {
            v.push(Op::JumpLe(0, 1, a));
            v.push(Op::JumpLe(1, 0, a));
        }
        v.push(Op::Goto(a));
    }
    v.push(Op::Halt);
    v
}

/// Every program with the given shape, in lexicographic order.
pub fn programs(registers: usize, lines: usize) -> impl Iterator<Item = Vec<Op>> {
    let alpha = alphabet(registers, lines);
    let total = alpha.len().pow(lines as u32);
    (0..total).map(move |mut n| {
        (0..lines)
            .map(|_| {
                let op = alpha[n % alpha.len()];
                n /= alpha.len();
                op
            })
            .collect()
    })
}

pub fn to_program(registers: usize, ops: &[Op]) -> Program {
    let mut src = format!("registers {registers}\n");
    for (pc, op) in ops.iter().enumerate() {
        let line = match *op {
            Op::SetZero(r) => format!("R{} := 0", r + 1),
            Op::SetOne(r) => format!("R{} := 1", r + 1),
            Op::Flip(r) => format!("R{0} := 1 - R{0}", r + 1),
            Op::JumpLe(i, j, a) => format!("if R{} <= R{} goto {a} else goto {}", i + 1, j + 1, pc + 1),
            Op::Goto(a) => format!("goto {a}"),
            Op::Halt => "halt".into(),
        };
        src.push_str(&format!("{pc}: {line}\n"));
    }
    parse_program(&src).unwrap()
}

type State = ([u8; 2], usize);

enum Seg {
    Halt,
    Limit(State, State),
}

fn min_of(states: &[State]) -> State {
    let mut m = states[0];
    for s in states {
        m.0[0] = m.0[0].min(s.0[0]);
        m.0[1] = m.0[1].min(s.0[1]);
        m.1 = m.1.min(s.1);
    }
    m
}

fn step(ops: &[Op], (mut r, pc): State) -> Option<State> {
    let next = match *ops.get(pc)? {
        Op::SetZero(i) => {
            r[i] = 0;
            pc + 1
        }
        Op::SetOne(i) => {
            r[i] = 1;
            pc + 1
        }
        Op::Flip(i) => {
            r[i] = 1 - r[i];
            pc + 1
        }
        Op::JumpLe(i, j, a) => {
            if r[i] <= r[j] {
                a
            } else {
                pc + 1
            }
        }
        Op::Goto(a) => a,
        Op::Halt => return None,
    };
    Some((r, next))
}

/// A segment of length `w^level`: halts inside, or reaches the limit; the
/// second state of a limit is the minimum over the whole segment.
fn segment(ops: &[Op], s: State, level: u32) -> Seg {
    let mut seen: HashMap<State, usize> = HashMap::new();
    let mut starts = Vec::new();
    let mut mins = Vec::new();
    let mut cur = s;
    loop {
        if let Some(&i) = seen.get(&cur) {
            return Seg::Limit(min_of(&mins[i..]), min_of(&mins));
        }
        seen.insert(cur, starts.len());
        starts.push(cur);
        if level == 1 {
            mins.push(cur);
            match step(ops, cur) {
                Some(t) => cur = t,
                None => return Seg::Halt,
            }
        } else {
            match segment(ops, cur, level - 1) {
                Seg::Halt => return Seg::Halt,
                Seg::Limit(next, m) => {
                    mins.push(m);
                    cur = next;
                }
            }
        }
    }
}

/// True when the run halts before stage `w^levels`.
pub fn halts_within(ops: &[Op], levels: u32) -> bool {
    match segment(ops, ([0, 0], 0), levels) {
        Seg::Halt => true,
        Seg::Limit(at, _) => step(ops, at).is_none(),
    }
}
