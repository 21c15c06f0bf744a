//! Compilation of a program into one whose registers hold `G`-images.

use std::collections::BTreeSet;

use crate::lang::{Expr, Instruction, Program};
use crate::number::Rational;

/// Which limit rule the transformed program is meant to run under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Witbm,
    Bsitbm,
    Ssitbm,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "witbm" => Ok(Mode::Witbm),
            "bsitbm" => Ok(Mode::Bsitbm),
            "ssitbm" => Ok(Mode::Ssitbm),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Label(usize);

enum Op {
    Compute(usize, Expr),
    Branch(usize, usize, Label, Label),
    Halt,
}

#[derive(Default)]
struct Asm {
    ops: Vec<(Op, Option<String>)>,
    labels: Vec<Option<usize>>,
}

impl Asm {
    fn label(&mut self) -> Label {
        self.labels.push(None);
        Label(self.labels.len() - 1)
    }

    fn bind(&mut self, l: Label) {
        self.labels[l.0] = Some(self.ops.len());
    }

    fn compute(&mut self, target: usize, e: Expr, note: Option<String>) {
        self.ops.push((Op::Compute(target, e), note));
    }

    fn branch(&mut self, l: usize, r: usize, le: Label, gt: Label, note: Option<String>) {
        self.ops.push((Op::Branch(l, r, le, gt), note));
    }

    fn halt(&mut self) {
        self.ops.push((Op::Halt, None));
    }

    fn goto(&mut self, t: Label) {
        self.branch(0, 0, t, t, None);
    }

    fn finish(self, registers: usize) -> Program {
        let at = |l: Label| self.labels[l.0].expect("every label is bound");
        let mut notes = Vec::with_capacity(self.ops.len());
        let instructions = self
            .ops
            .iter()
            .map(|(op, note)| {
                notes.push(note.clone());
                match op {
                    Op::Compute(t, e) => Instruction::compute(*t, e.clone()),
                    Op::Branch(l, r, a, b) => Instruction::branch(*l, *r, at(*a), at(*b)),
                    Op::Halt => Instruction::Halt,
                }
            })
            .collect();
        Program::new(registers, instructions).expect("generated program is valid").with_notes(notes)
    }
}

fn c(s: &str) -> Expr {
    Expr::Const(s.parse::<Rational>().expect("literal"))
}

fn two_times(e: Expr) -> Expr {
    Expr::mul(c("2"), e)
}

/// `G` for a non-positive argument.
fn g_neg(s: Expr) -> Expr {
    Expr::div(c("1"), Expr::sub(c("2"), two_times(s)))
}

/// `G` for a non-negative argument.
fn g_pos(s: Expr) -> Expr {
    Expr::div(Expr::add(two_times(s.clone()), c("1")), Expr::add(two_times(s), c("2")))
}

/// `G^-1` of an image at most 1/2.
fn ginv_low(y: Expr) -> Expr {
    Expr::div(Expr::sub(two_times(y.clone()), c("1")), two_times(y))
}

/// `G^-1` of an image at least 1/2.
fn ginv_high(y: Expr) -> Expr {
    Expr::div(Expr::sub(two_times(y.clone()), c("1")), Expr::sub(c("2"), two_times(y)))
}

fn substitute(e: &Expr, map: &dyn Fn(usize) -> Expr) -> Expr {
    match e {
        Expr::Const(_) => e.clone(),
        Expr::Reg(i) => map(*i),
        Expr::Neg(a) => Expr::neg(substitute(a, map)),
        Expr::Add(a, b) => Expr::add(substitute(a, map), substitute(b, map)),
        Expr::Sub(a, b) => Expr::sub(substitute(a, map), substitute(b, map)),
        Expr::Mul(a, b) => Expr::mul(substitute(a, map), substitute(b, map)),
        Expr::Div(a, b) => Expr::div(substitute(a, map), substitute(b, map)),
    }
}

fn regs_of(e: &Expr, out: &mut BTreeSet<usize>) {
    match e {
        Expr::Const(_) => {}
        Expr::Reg(i) => {
            out.insert(*i);
        }
        Expr::Neg(a) => regs_of(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            regs_of(a, out);
            regs_of(b, out);
        }
    }
}

/// Register layout of a transformed program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub originals: usize,
}

impl Layout {
    pub fn zero(&self) -> usize {
        self.originals
    }
    pub fn one(&self) -> usize {
        self.originals + 1
    }
    pub fn half(&self) -> usize {
        self.originals + 2
    }
    /// Scratch register holding results in original coordinates.
    pub fn scratch(&self) -> usize {
        self.originals + 3
    }
    /// Previous value, in original coordinates, of the register being written.
    pub fn old(&self) -> usize {
        self.originals + 4
    }
    pub fn monitor_c(&self, i: usize) -> usize {
        self.originals + 5 + 2 * i
    }
    pub fn monitor_d(&self, i: usize) -> usize {
        self.originals + 6 + 2 * i
    }
    pub fn registers(&self, mode: Mode) -> usize {
        match mode {
            Mode::Bsitbm => self.originals + 5 + 2 * self.originals,
            _ => self.originals + 5,
        }
    }
}

struct Compiler {
    asm: Asm,
    lay: Layout,
    mode: Mode,
    blocks: Vec<Label>,
    epilogue: Label,
    trap: Label,
}

impl Compiler {
    fn target(&self, t: usize) -> Label {
        self.blocks.get(t).copied().unwrap_or(self.epilogue)
    }

    /// `target := G(scratch)`, splitting on the sign of the scratch value.
    fn apply_forward(&mut self, target: usize, note: &str) {
        let (neg, pos, done) = (self.asm.label(), self.asm.label(), self.asm.label());
        let s = self.lay.scratch();
        self.asm.branch(s, self.lay.zero(), neg, pos, Some(format!("{note}: sign")));
        self.asm.bind(neg);
        self.asm.compute(target, g_neg(Expr::Reg(s)), None);
        self.asm.goto(done);
        self.asm.bind(pos);
        self.asm.compute(target, g_pos(Expr::Reg(s)), None);
        self.asm.bind(done);
    }

    fn guard(&mut self, i: usize) {
        let lay = self.lay;
        let (fix, high, next) = (self.asm.label(), self.asm.label(), self.asm.label());
        self.asm.branch(i, lay.zero(), fix, high, Some(format!("guard R{}", i + 1)));
        self.asm.bind(high);
        self.asm.branch(lay.one(), i, fix, next, Some(format!("guard R{}", i + 1)));
        self.asm.bind(fix);
        if self.mode == Mode::Bsitbm {
            let reset = self.asm.label();
            self.asm.branch(lay.monitor_c(i), lay.zero(), self.trap, reset, Some(format!("guard R{}: monitor", i + 1)));
            self.asm.bind(reset);
        }
        self.asm.compute(i, c("1/2"), Some(format!("guard R{}: reset", i + 1)));
        self.asm.bind(next);
    }

    fn monitor(&mut self, i: usize) {
        let lay = self.lay;
        let a = &mut self.asm;
        let (up, down, dec, inc, set_c, end) = (a.label(), a.label(), a.label(), a.label(), a.label(), a.label());
        a.branch(lay.monitor_d(i), lay.zero(), up, down, Some(format!("monitor R{}", i + 1)));
        a.bind(up);
        a.branch(lay.old(), lay.scratch(), set_c, dec, None);
        a.bind(dec);
        a.compute(lay.monitor_d(i), c("1"), None);
        a.compute(lay.monitor_c(i), c("0"), None);
        a.goto(end);
        a.bind(down);
        a.branch(lay.scratch(), lay.old(), set_c, inc, None);
        a.bind(inc);
        a.compute(lay.monitor_d(i), c("0"), None);
        a.compute(lay.monitor_c(i), c("0"), None);
        a.goto(end);
        a.bind(set_c);
        a.compute(lay.monitor_c(i), c("1"), None);
        a.bind(end);
    }

    fn compute(&mut self, line: usize, target: usize, expr: &Expr) {
        let lay = self.lay;
        let note = format!("op {line}: R{} := {expr}", target + 1);
        if self.mode == Mode::Bsitbm {
            let (low, high, kept) = (self.asm.label(), self.asm.label(), self.asm.label());
            self.asm.branch(target, lay.half(), low, high, Some(format!("{note}: keep old")));
            self.asm.bind(low);
            self.asm.compute(lay.old(), ginv_low(Expr::Reg(target)), None);
            self.asm.goto(kept);
            self.asm.bind(high);
            self.asm.compute(lay.old(), ginv_high(Expr::Reg(target)), None);
            self.asm.bind(kept);
        }
        let mut args = BTreeSet::new();
        regs_of(expr, &mut args);
        let args: Vec<usize> = args.into_iter().collect();
        let apply = self.asm.label();
        self.split(&args, 0, &mut Vec::new(), expr, apply, &note);
        self.asm.bind(apply);
        self.apply_forward(target, &note);
        if self.mode == Mode::Bsitbm {
            self.monitor(target);
            self.asm.compute(lay.old(), c("0"), None);
        }
        if self.mode != Mode::Witbm {
            self.asm.compute(lay.scratch(), c("0"), None);
        }
    }

    /// Decision tree over the signs of the arguments; each leaf evaluates
    /// the original expression in original coordinates.
    fn split(&mut self, args: &[usize], k: usize, low: &mut Vec<bool>, expr: &Expr, apply: Label, note: &str) {
        if k == args.len() {
            let map = |r: usize| match args.iter().position(|&a| a == r) {
                Some(p) if low[p] => ginv_low(Expr::Reg(r)),
                _ => ginv_high(Expr::Reg(r)),
            };
            self.asm.compute(self.lay.scratch(), substitute(expr, &map), None);
            self.asm.goto(apply);
            return;
        }
        let (lo, hi) = (self.asm.label(), self.asm.label());
        let n = if k == 0 { Some(format!("{note}: pull back")) } else { None };
        self.asm.branch(args[k], self.lay.half(), lo, hi, n);
        for (lbl, is_low) in [(lo, true), (hi, false)] {
            self.asm.bind(lbl);
            low.push(is_low);
            self.split(args, k + 1, low, expr, apply, note);
            low.pop();
        }
    }
}

/// Compiles `p` into a program over `G`-images of its registers.
///
/// Registers `R1..Rn` keep their roles, now holding images in `(0, 1)`;
/// constants 0, 1 and 1/2, a scratch register, the previous value of the
/// register being written and (in BSITBM mode) the monitors follow.
pub fn to_unit_interval(p: &Program, mode: Mode) -> Program {
    let lay = Layout { originals: p.registers() };
    let mut asm = Asm::default();
    let blocks = (0..p.len()).map(|_| asm.label()).collect();
    let epilogue = asm.label();
    let trap = asm.label();
    let mut cc = Compiler { asm, lay, mode, blocks, epilogue, trap };
    cc.asm.compute(lay.one(), c("1"), Some("prologue".into()));
    cc.asm.compute(lay.half(), c("1/2"), None);
    for i in 0..lay.originals {
        cc.asm.compute(lay.scratch(), Expr::Reg(i), Some(format!("prologue: map R{}", i + 1)));
        cc.apply_forward(i, &format!("prologue R{}", i + 1));
    }
    cc.asm.compute(lay.scratch(), c("0"), None);
    for (line, ins) in p.instructions().iter().enumerate() {
        let start = cc.blocks[line];
        cc.asm.bind(start);
        for i in 0..lay.originals {
            cc.guard(i);
        }
        match ins {
            Instruction::Compute { target, expr } => cc.compute(line, *target, expr),
            Instruction::Branch { left, right, if_le, if_gt } => {
                let (a, b) = (cc.target(*if_le), cc.target(*if_gt));
                cc.asm.branch(*left, *right, a, b, Some(format!("op {line}: {ins}")));
            }
            Instruction::Halt => {
                let e = cc.epilogue;
                cc.asm.goto(e);
            }
        }
    }
    let e = cc.epilogue;
    cc.asm.bind(e);
    let (low, high) = (cc.asm.label(), cc.asm.label());
    cc.asm.branch(0, lay.half(), low, high, Some("epilogue".into()));
    cc.asm.bind(low);
    cc.asm.compute(0, ginv_low(Expr::Reg(0)), None);
    let halt_at = cc.asm.label();
    cc.asm.goto(halt_at);
    cc.asm.bind(high);
    cc.asm.compute(0, ginv_high(Expr::Reg(0)), None);
    cc.asm.goto(halt_at);
    let t = cc.trap;
    cc.asm.bind(t);
    cc.asm.goto(t);
    cc.asm.bind(halt_at);
    cc.asm.halt();
    cc.asm.finish(lay.registers(mode))
}
