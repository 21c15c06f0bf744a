//! Blocks of completed segments and acceleration of block cycles.

use std::collections::BTreeSet;

use super::{Ext, InfFlag, LimitSetDescriptor, Snapshot};
use crate::number::Rational;

/// Summary of one segment ending at a limit stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Block {
    pub start: Snapshot,
    /// Canonical description of the control path through the segment.
    pub signature: Vec<usize>,
    /// Closed hull of every register over the segment; `None` if unknown.
    pub lo: Vec<Option<Ext>>,
    pub hi: Vec<Option<Ext>>,
    pub min_pc: usize,
    /// Comparisons made before the segment settled into its cycle:
    /// `(left, right, left value, right value)`, in execution order.
    pub observations: Vec<(usize, usize, Rational, Rational)>,
    /// Register pairs compared inside the cycle of the segment.
    pub branch_pairs: BTreeSet<(usize, usize)>,
}

pub(crate) enum MacroOutcome {
    Accepted { sets: Vec<LimitSetDescriptor>, pc: usize, summary: Block, floor: Vec<Ext>, floor_pc: usize },
    NoCycleYet,
    Unclassifiable(Option<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Class {
    Periodic,
    Drift(Rational),
    /// Confined to `(0, 1)` and drifting by the given step once pulled
    /// back to the line by the inverse of `x -> 1/2 + x/(2(1 + |x|))`.
    Conjugate(Rational),
}

/// The inverse of `x -> 1/2 + x/(2(1 + |x|))`, sending `0` and `1` to the
/// infinities; `None` outside `[0, 1]`.
fn unit_to_line(y: &Ext) -> Option<Ext> {
    let Ext::Finite(y) = y else { return None };
    let (one, two) = (Rational::one(), Rational::from_int(2));
    if y.is_negative() || *y > one {
        return None;
    }
    if y.is_zero() {
        return Some(Ext::NegInf);
    }
    if *y == one {
        return Some(Ext::PosInf);
    }
    let u = &two * y - &one;
    let den = if u.is_negative() { &two * y } else { &two - &(&two * y) };
    Some(Ext::Finite(u.checked_div(&den).expect("inside (0, 1)")))
}

fn line_value(y: &Rational) -> Option<Rational> {
    match unit_to_line(&Ext::Finite(y.clone()))? {
        Ext::Finite(x) => Some(x),
        _ => None,
    }
}

fn min_opt(a: &Option<Ext>, b: &Option<Ext>) -> Option<Ext> {
    Some(a.clone()?.min(b.clone()?))
}

fn max_opt(a: &Option<Ext>, b: &Option<Ext>) -> Option<Ext> {
    Some(a.clone()?.max(b.clone()?))
}

fn shifted(x: &Option<Ext>, y: &Option<Ext>, b: &Rational) -> bool {
    match (x, y) {
        (Some(Ext::Finite(x)), Some(Ext::Finite(y))) => &(x + b) == y,
        (Some(x), Some(y)) => x == y && x.finite().is_none(),
        _ => false,
    }
}

/// Earliest index from which block signatures repeat with period `q`.
fn periodic_from(blocks: &[Block], q: usize) -> usize {
    let mut t0 = blocks.len() - q;
    while t0 > 0 && blocks[t0 - 1].signature == blocks[t0 - 1 + q].signature {
        t0 -= 1;
    }
    t0
}

fn summarize(blocks: &[Block], level: usize, t0: usize, q: usize, classes: &[Class]) -> Block {
    let mut signature = vec![level, t0, q];
    for b in &blocks[..t0 + q] {
        signature.push(b.signature.len());
        signature.extend(&b.signature);
    }
    let regs = blocks[0].lo.len();
    let mut lo = blocks[0].lo.clone();
    let mut hi = blocks[0].hi.clone();
    let mut branch_pairs = BTreeSet::new();
    for b in blocks {
        for i in 0..regs {
            lo[i] = min_opt(&lo[i], &b.lo[i]);
            hi[i] = max_opt(&hi[i], &b.hi[i]);
        }
        branch_pairs.extend(&b.branch_pairs);
        branch_pairs.extend(b.observations.iter().map(|o| (o.0, o.1)));
    }
    for (i, c) in classes.iter().enumerate() {
        match c {
            Class::Drift(b) if b.is_positive() => hi[i] = Some(Ext::PosInf),
            Class::Drift(_) => lo[i] = Some(Ext::NegInf),
            Class::Conjugate(b) if b.is_positive() => hi[i] = Some(Ext::Finite(Rational::one())),
            Class::Conjugate(_) => lo[i] = Some(Ext::Finite(Rational::zero())),
            Class::Periodic => {}
        }
    }
    Block {
        start: blocks[0].start.clone(),
        signature,
        lo,
        hi,
        min_pc: blocks.iter().map(|b| b.min_pc).min().unwrap_or(0),
        observations: Vec::new(),
        branch_pairs,
    }
}

/// Limit points of a register over blocks repeating forever.
///
/// With an infinite bound only the block start values are known to be
/// finite limit points; `strict` refuses that case when `-inf` is involved.
fn periodic_set(period: &[Block], i: usize, strict: bool) -> Option<LimitSetDescriptor> {
    let mut set = LimitSetDescriptor::default();
    for b in period {
        for bound in [&b.lo[i], &b.hi[i]] {
            match bound.as_ref()? {
                Ext::Finite(v) => {
                    set.finite_points.insert(v.clone());
                }
                Ext::PosInf => set.plus_inf = InfFlag::LimitPoint,
                Ext::NegInf => set.minus_inf = InfFlag::LimitPoint,
            }
        }
    }
    if set.minus_inf != InfFlag::Absent || set.plus_inf != InfFlag::Absent {
        if strict && set.minus_inf != InfFlag::Absent {
            return None;
        }
        set.finite_points.extend(period.iter().map(|b| b.start.registers[i].clone()));
    }
    let (first, last) = (set.finite_points.first().cloned(), set.finite_points.last().cloned());
    set.finite_points = first.into_iter().chain(last).collect();
    (!set.finite_points.is_empty()).then_some(set)
}

fn periodic_sets(period: &[Block], regs: usize, strict: bool) -> Result<Vec<LimitSetDescriptor>, usize> {
    (0..regs).map(|i| periodic_set(period, i, strict).ok_or(i)).collect()
}

fn floor_of(period: &[Block], regs: usize, classes: &[Class]) -> (Vec<Ext>, usize) {
    let floor = (0..regs)
        .map(|i| match &classes[i] {
            Class::Drift(b) if b.is_negative() => Ext::NegInf,
            Class::Conjugate(b) if b.is_negative() => Ext::Finite(Rational::zero()),
            _ => period
                .iter()
                .map(|b| b.lo[i].clone().unwrap_or(Ext::NegInf))
                .min()
                .unwrap_or(Ext::NegInf),
        })
        .collect();
    (floor, period.iter().map(|b| b.min_pc).min().unwrap_or(0))
}

/// Common per-pass step of a register whose block starts and hulls all
/// move by the same amount from one pass of the block cycle to the next.
fn drift(
    q: usize,
    passes: usize,
    view: impl Fn(usize, usize) -> Option<(Rational, Option<Ext>, Option<Ext>)>,
) -> Option<Rational> {
    let b = &view(1, 0)?.0 - &view(0, 0)?.0;
    for phase in 0..q {
        for w in 1..passes {
            let ((xs, xlo, xhi), (ys, ylo, yhi)) = (view(w - 1, phase)?, view(w, phase)?);
            let hulls = if b.is_zero() {
                xlo.is_some() && xlo == ylo && xhi == yhi
            } else {
                shifted(&xlo, &ylo, &b) && shifted(&xhi, &yhi, &b)
            };
            if &xs + &b != ys || !hulls {
                return None;
            }
        }
    }
    Some(b)
}

/// Certifies a cycle of blocks ending at the current snapshot.
/// `strict` is set for rules whose value depends on the least finite
/// limit point even when `-inf` is a limit point.
pub(crate) fn accelerate_blocks(
    blocks: &[Block],
    current: &Snapshot,
    passes: usize,
    level: usize,
    strict: bool,
) -> MacroOutcome {
    let n = blocks.len();
    let regs = current.registers.len();
    if let Some(j) = (0..n).rev().find(|&j| &blocks[j].start == current) {
        let q = n - j;
        let period = &blocks[j..];
        let classes = vec![Class::Periodic; regs];
        let sets = match periodic_sets(period, regs, strict) {
            Ok(s) => s,
            Err(i) => return MacroOutcome::Unclassifiable(Some(i)),
        };
        let pc = period.iter().map(|b| b.min_pc).min().unwrap_or(0);
        let (floor, floor_pc) = floor_of(period, regs, &classes);
        let t0 = periodic_from(blocks, q).min(j);
        let summary = summarize(blocks, level, t0, q, &classes);
        return MacroOutcome::Accepted { sets, pc, summary, floor, floor_pc };
    }
    let passes = passes.max(2);
    let Some(q) = (1..=n / passes).find(|&q| (n - (passes - 1) * q..n).all(|t| blocks[t].signature == blocks[t - q].signature))
    else {
        return MacroOutcome::NoCycleYet;
    };
    let base = n - passes * q;
    let pass = |w: usize, phase: usize| &blocks[base + w * q + phase];
    let mut classes = Vec::with_capacity(regs);
    for i in 0..regs {
        let plain = drift(q, passes, |w, ph| {
            let b = pass(w, ph);
            Some((b.start.registers[i].clone(), b.lo[i].clone(), b.hi[i].clone()))
        });
        let class = match plain {
            Some(b) if b.is_zero() => Class::Periodic,
            Some(b) => Class::Drift(b),
            None => {
                let pulled = drift(q, passes, |w, ph| {
                    let b = pass(w, ph);
                    let pull = |e: &Option<Ext>| e.as_ref().and_then(unit_to_line);
                    Some((line_value(&b.start.registers[i])?, pull(&b.lo[i]), pull(&b.hi[i])))
                });
                match pulled {
                    Some(b) if !b.is_zero() => Class::Conjugate(b),
                    _ => return MacroOutcome::Unclassifiable(Some(i)),
                }
            }
        };
        classes.push(class);
    }
    let last = &blocks[n - q..];
    let outside = |r: usize| {
        let above = last.iter().all(|b| matches!(&b.lo[r], Some(Ext::Finite(v)) if *v >= Rational::one()));
        let below = last.iter().all(|b| matches!(&b.hi[r], Some(Ext::Finite(v)) if !v.is_positive()));
        classes[r] == Class::Periodic && (above || below)
    };
    let separated = |l: usize, r: usize| match (&classes[l], &classes[r]) {
        (Class::Periodic, Class::Periodic) => true,
        (Class::Conjugate(_), _) => outside(r),
        (_, Class::Conjugate(_)) => outside(l),
        _ => false,
    };
    for b in last {
        if let Some(&(l, _)) = b.branch_pairs.iter().find(|&&(l, r)| !separated(l, r)) {
            return MacroOutcome::Unclassifiable(Some(l));
        }
    }
    let conj = |r: usize| matches!(classes[r], Class::Conjugate(_));
    for phase in 0..q {
        let obs: Vec<_> = (0..passes).map(|w| &pass(w, phase).observations).collect();
        for m in 0..obs[0].len() {
            let (l, r) = (obs[0][m].0, obs[0][m].1);
            let mut diffs = Vec::with_capacity(passes);
            for o in &obs {
                let (_, _, lv, rv) = &o[m];
                let d = if !conj(l) && !conj(r) {
                    Some(lv - rv)
                } else if let (Some(x), Some(y)) = (line_value(lv), line_value(rv)) {
                    Some(x - y)
                } else if separated(l, r) {
                    Some(if lv <= rv { Rational::zero() } else { Rational::one() })
                } else {
                    None
                };
                let Some(d) = d else { return MacroOutcome::Unclassifiable(Some(l)) };
                diffs.push(d);
            }
            let e = &diffs[1] - &diffs[0];
            if (2..passes).any(|w| &diffs[w] - &diffs[w - 1] != e) {
                return MacroOutcome::Unclassifiable(Some(l));
            }
            let now = &diffs[passes - 1];
            let stable = e.is_zero() || (e.is_negative() && !now.is_positive()) || (e.is_positive() && now.is_positive());
            if !stable {
                return MacroOutcome::NoCycleYet;
            }
        }
    }
    let mut sets = Vec::with_capacity(regs);
    for (i, c) in classes.iter().enumerate() {
        let set = match c {
            Class::Periodic => periodic_set(last, i, strict),
            Class::Drift(b) => {
                let bounded = last.iter().all(|blk| {
                    let side = if b.is_positive() { &blk.lo[i] } else { &blk.hi[i] };
                    matches!(side, Some(Ext::Finite(_)))
                });
                let strong = if b.is_positive() { LimitSetDescriptor::strong_plus() } else { LimitSetDescriptor::strong_minus() };
                bounded.then_some(strong)
            }
            Class::Conjugate(b) => {
                let interior = |e: &Option<Ext>| matches!(e.as_ref().and_then(unit_to_line), Some(Ext::Finite(_)));
                let bounded = last.iter().all(|blk| interior(if b.is_positive() { &blk.lo[i] } else { &blk.hi[i] }));
                let edge = if b.is_positive() { Rational::one() } else { Rational::zero() };
                bounded.then(|| LimitSetDescriptor::point(edge))
            }
        };
        match set {
            Some(s) => sets.push(s),
            None => return MacroOutcome::Unclassifiable(Some(i)),
        }
    }
    let pc = last.iter().map(|b| b.min_pc).min().unwrap_or(0);
    let (floor, floor_pc) = floor_of(last, regs, &classes);
    let t0 = periodic_from(blocks, q);
    let summary = summarize(blocks, level, t0, q, &classes);
    MacroOutcome::Accepted { sets, pc, summary, floor, floor_pc }
}
