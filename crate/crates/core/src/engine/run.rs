use std::collections::{BTreeSet, HashMap};

use super::accel::{accelerate_exact, accelerate_period};
use super::nested::{accelerate_blocks, Block, MacroOutcome};
use super::{
    apply_limit_rule, is_halting, limit_sets, step, Acceleration, CrashReason, Event, Ext, Floor, LimitSetDescriptor,
    Restriction, Snapshot, StepOutcome, TraceRecord, Variant, Verdict,
};
use crate::analysis::StrongLoopDetector;
use crate::lang::{Instruction, Program};
use crate::number::Rational;
use crate::ordinal::Ordinal;

const MAX_PERIOD: usize = 512;
const MAX_UNCLASSIFIED: usize = 3;

/// Which records a run keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TraceLevel {
    Off,
    #[default]
    Limits,
    All,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub variant: Variant,
    /// Largest stage the machine may reach.
    pub budget: Ordinal,
    pub restriction: Restriction,
    /// Deepest nesting of accelerated limits.
    pub depth: usize,
    /// Verified passes required before a cycle is accelerated.
    pub passes: usize,
    /// Cap on executed successor steps.
    pub fuel: u64,
    pub trace: TraceLevel,
    pub spot_check: bool,
    pub detect_loops: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            variant: Variant::Sitbm,
            budget: Ordinal::omega_pow(3),
            restriction: Restriction::Rationals,
            depth: 3,
            passes: 8,
            fuel: 2_000_000,
            trace: TraceLevel::Limits,
            spot_check: true,
            detect_loops: true,
        }
    }
}

impl RunConfig {
    pub fn new(variant: Variant) -> Self {
        RunConfig { variant, ..Default::default() }
    }

    pub fn budget(mut self, budget: Ordinal) -> Self {
        self.budget = budget;
        self
    }

    pub fn restriction(mut self, r: Restriction) -> Self {
        self.restriction = r;
        self
    }

    pub fn depth(mut self, depth: usize) -> Self {
        self.depth = depth.max(1);
        self
    }

    pub fn trace(mut self, level: TraceLevel) -> Self {
        self.trace = level;
        self
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub verdict: Verdict,
    pub trace: Vec<TraceRecord>,
    /// Successor steps executed, spot checks included.
    pub steps: u64,
}

/// Runs `p` on `inputs` (placed in `R1..`) with the given parameters.
pub fn run(
    p: &Program,
    inputs: &[Rational],
    variant: Variant,
    budget: Ordinal,
    restriction: Restriction,
    depth: usize,
) -> RunResult {
    run_with(p, inputs, &RunConfig::new(variant).budget(budget).restriction(restriction).depth(depth))
}

pub fn run_with(p: &Program, inputs: &[Rational], cfg: &RunConfig) -> RunResult {
    let snap = Snapshot::initial(p.registers(), inputs);
    let mut m = Machine {
        p,
        cfg,
        snap,
        stage: Ordinal::zero(),
        steps: 0,
        trace: Vec::new(),
        detector: StrongLoopDetector::new(),
    };
    let verdict = m.top();
    RunResult { verdict, trace: m.trace, steps: m.steps }
}

enum Seg {
    Limit(Block),
    Done(Verdict),
}

struct Machine<'a> {
    p: &'a Program,
    cfg: &'a RunConfig,
    snap: Snapshot,
    stage: Ordinal,
    steps: u64,
    trace: Vec<TraceRecord>,
    detector: StrongLoopDetector,
}

impl Machine<'_> {
    fn top(&mut self) -> Verdict {
        if !self.cfg.restriction.allows_all(&self.snap.registers) {
            return self.crash(CrashReason::RestrictionViolated);
        }
        let floor = Floor::of(&self.snap);
        if let Some(v) = self.emit(Event::Step, floor) {
            return v;
        }
        loop {
            if let Seg::Done(v) = self.segment(self.cfg.depth) {
                return v;
            }
        }
    }

    fn emit(&mut self, event: Event, floor: Floor) -> Option<Verdict> {
        let rec = TraceRecord { stage: self.stage.clone(), snapshot: self.snap.clone(), event, floor };
        let witness = if self.cfg.detect_loops { self.detector.observe(&rec) } else { None };
        let keep = match self.cfg.trace {
            TraceLevel::Off => false,
            TraceLevel::Limits => event != Event::Step,
            TraceLevel::All => true,
        };
        if keep {
            self.trace.push(rec);
        }
        witness.map(|w| Verdict::Diverged { loop_start: w.gamma, loop_end: w.beta })
    }

    fn crash(&mut self, reason: CrashReason) -> Verdict {
        let floor = Floor::of(&self.snap);
        self.emit(Event::Crash, floor);
        Verdict::Crashed { stage: self.stage.clone(), reason }
    }

    fn exhausted(&self) -> Verdict {
        Verdict::BudgetExhausted { stage: self.stage.clone(), snapshot: self.snap.clone() }
    }

    fn segment(&mut self, level: usize) -> Seg {
        if level <= 1 {
            self.base_segment()
        } else {
            self.nested_segment(level)
        }
    }

    /// Moves to a limit stage with the given register limit sets.
    fn enter_limit(&mut self, limit: Ordinal, sets: &[LimitSetDescriptor], pcs: &BTreeSet<usize>, mut floor: Floor) -> Option<Verdict> {
        if limit > self.cfg.budget {
            return Some(self.exhausted());
        }
        self.stage = limit;
        match apply_limit_rule(self.cfg.variant, sets, pcs) {
            Err((_, reason)) => Some(self.crash(reason)),
            Ok(s) => {
                self.snap = s;
                if !self.cfg.restriction.allows_all(&self.snap.registers) {
                    return Some(self.crash(CrashReason::RestrictionViolated));
                }
                floor.meet(&Floor::of(&self.snap));
                self.emit(Event::Limit, floor)
            }
        }
    }

    fn base_segment(&mut self) -> Seg {
        let passes = self.cfg.passes.max(1);
        let mut history = vec![self.snap.clone()];
        let mut seen: HashMap<Snapshot, usize> = HashMap::from([(self.snap.clone(), 0)]);
        let mut runs = vec![0usize; MAX_PERIOD + 1];
        let mut retry_at = vec![0usize; MAX_PERIOD + 1];
        let mut misses = vec![0u32; MAX_PERIOD + 1];
        let mut unclassified = 0;
        loop {
            if is_halting(self.p, &self.snap) {
                let floor = Floor::of(&self.snap);
                self.emit(Event::Halt, floor);
                return Seg::Done(Verdict::Halted { stage: self.stage.clone(), output: self.snap.registers[0].clone() });
            }
            if self.stage >= self.cfg.budget || self.steps >= self.cfg.fuel {
                return Seg::Done(self.exhausted());
            }
            let next = match step(self.p, &self.snap) {
                StepOutcome::Next(s) => s,
                StepOutcome::Crash(r) => return Seg::Done(self.crash(r)),
                StepOutcome::Halt(_) => unreachable!("halting lines are handled above"),
            };
            self.steps += 1;
            self.stage = self.stage.succ();
            self.snap = next;
            if !self.cfg.restriction.allows_all(&self.snap.registers) {
                return Seg::Done(self.crash(CrashReason::RestrictionViolated));
            }
            let floor = Floor::of(&self.snap);
            if let Some(v) = self.emit(Event::Step, floor) {
                return Seg::Done(v);
            }
            history.push(self.snap.clone());
            let n = history.len() - 1;
            let acc = if let Some(&first) = seen.get(&self.snap) {
                Some((accelerate_exact(&history, first), n - first))
            } else {
                seen.insert(self.snap.clone(), n);
                let mut found = None;
                for p in 1..=MAX_PERIOD.min(n) {
                    if history[n].pc == history[n - p].pc {
                        runs[p] += 1;
                    } else {
                        runs[p] = 0;
                    }
                    if found.is_none() && runs[p] >= passes * p && n >= retry_at[p] {
                        found = Some(p);
                    }
                }
                found.map(|p| (accelerate_period(self.p, &history, p, passes, self.cfg.spot_check), p))
            };
            let Some((acc, p)) = acc else { continue };
            match acc {
                Acceleration::Accepted { tails, pcs, cycle, .. } => {
                    if self.cfg.spot_check {
                        self.steps += 4 * cycle.period as u64;
                    }
                    return self.finish_base(&history, tails, pcs, cycle.period);
                }
                Acceleration::NoCycleYet => {
                    let k = p.min(MAX_PERIOD);
                    let until = n + ((p * passes.div_ceil(2)) << misses[k].min(12));
                    misses[k] += 1;
                    for m in (k..=MAX_PERIOD).step_by(k) {
                        retry_at[m] = retry_at[m].max(until);
                    }
                }
                Acceleration::Unclassifiable(r) => {
                    unclassified += 1;
                    if unclassified >= MAX_UNCLASSIFIED {
                        return Seg::Done(Verdict::Unresolved { stage: self.stage.clone(), register: r });
                    }
                    retry_at[p.min(MAX_PERIOD)] = n + p * passes;
                }
            }
        }
    }

    fn finish_base(
        &mut self,
        history: &[Snapshot],
        tails: Vec<Vec<super::OffsetTail>>,
        pcs: BTreeSet<usize>,
        period: usize,
    ) -> Seg {
        let sets = match limit_sets(&tails) {
            Ok(s) => s,
            Err(r) => return Seg::Done(Verdict::Unresolved { stage: self.stage.clone(), register: Some(r) }),
        };
        let regs = self.snap.registers.len();
        let hulls: Vec<Vec<(Option<Ext>, Option<Ext>)>> =
            tails.iter().map(|offs| offs.iter().map(|t| t.hull()).collect()).collect();
        let floor_pc = *pcs.first().expect("nonempty cycle");
        let floor = Floor {
            registers: hulls
                .iter()
                .map(|h| h.iter().map(|(lo, _)| lo.clone().unwrap_or(Ext::NegInf)).min().unwrap_or(Ext::NegInf))
                .collect(),
            pc: floor_pc,
        };
        let block = base_block(self.p, history, period, &hulls, regs);
        self.emit(Event::Accel, Floor::of(&self.snap));
        let limit = self.stage.next_multiple_of_omega_pow(1);
        match self.enter_limit(limit, &sets, &pcs, floor) {
            Some(v) => Seg::Done(v),
            None => Seg::Limit(block),
        }
    }

    fn nested_segment(&mut self, level: usize) -> Seg {
        let mut blocks: Vec<Block> = Vec::new();
        let mut unclassified = 0;
        let mut retry_at = 0;
        loop {
            match self.segment(level - 1) {
                Seg::Done(v) => return Seg::Done(v),
                Seg::Limit(b) => blocks.push(b),
            }
            if blocks.len() < retry_at {
                continue;
            }
            match accelerate_blocks(&blocks, &self.snap, self.cfg.passes, level, self.cfg.variant == Variant::Bsitbm) {
                MacroOutcome::Accepted { sets, pc, summary, floor, floor_pc } => {
                    self.emit(Event::Accel, Floor::of(&self.snap));
                    let limit = self.stage.next_multiple_of_omega_pow(level as u64);
                    let floor = Floor { registers: floor, pc: floor_pc };
                    return match self.enter_limit(limit, &sets, &BTreeSet::from([pc]), floor) {
                        Some(v) => Seg::Done(v),
                        None => Seg::Limit(summary),
                    };
                }
                MacroOutcome::NoCycleYet => {}
                MacroOutcome::Unclassifiable(r) => {
                    unclassified += 1;
                    if unclassified >= MAX_UNCLASSIFIED {
                        return Seg::Done(Verdict::Unresolved { stage: self.stage.clone(), register: r });
                    }
                    retry_at = blocks.len() + self.cfg.passes;
                }
            }
        }
    }
}

fn base_block(p: &Program, history: &[Snapshot], period: usize, hulls: &[Vec<(Option<Ext>, Option<Ext>)>], regs: usize) -> Block {
    let n = history.len() - 1;
    let mut t0 = n - period;
    while t0 > 0 && history[t0 - 1].pc == history[t0 - 1 + period].pc {
        t0 -= 1;
    }
    let mut signature = vec![1, t0, period];
    signature.extend(history[..t0 + period].iter().map(|s| s.pc));
    let mut lo: Vec<Option<Ext>> = Vec::with_capacity(regs);
    let mut hi: Vec<Option<Ext>> = Vec::with_capacity(regs);
    for i in 0..regs {
        let vals = history.iter().map(|s| Ext::Finite(s.registers[i].clone()));
        let (mut l, mut h) = (vals.clone().min(), vals.max());
        for (tl, th) in &hulls[i] {
            l = match (l, tl) {
                (Some(a), Some(b)) => Some(a.min(b.clone())),
                _ => None,
            };
            h = match (h, th) {
                (Some(a), Some(b)) => Some(a.max(b.clone())),
                _ => None,
            };
        }
        lo.push(l);
        hi.push(h);
    }
    let branch = |s: &Snapshot| match p.get(s.pc) {
        Some(Instruction::Branch { left, right, .. }) if left != right => Some((*left, *right)),
        _ => None,
    };
    let observations = history[..t0]
        .iter()
        .filter_map(|s| branch(s).map(|(l, r)| (l, r, s.registers[l].clone(), s.registers[r].clone())))
        .collect();
    let branch_pairs = history[n - period..n].iter().filter_map(branch).collect();
    Block {
        start: history[0].clone(),
        signature,
        lo,
        hi,
        min_pc: history.iter().map(|s| s.pc).min().unwrap_or(0),
        observations,
        branch_pairs,
    }
}
