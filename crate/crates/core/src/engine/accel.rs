//! Certified acceleration of a control cycle to its limit stage.

use std::collections::BTreeSet;

use super::limits::Ext;
use super::tail::Shape;
use super::{step, OffsetTail, Snapshot, StepOutcome};
use crate::lang::{Instruction, Program};
use crate::number::{Monomial, Poly, Rational, RationalFunction};

/// Location of a certified cycle in a history: the pass starting at
/// `start` repeats forever with `period` steps per pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub start: usize,
    pub period: usize,
}

#[derive(Clone, Debug)]
pub enum Acceleration {
    Accepted {
        cycle: Cycle,
        /// Composed per-pass map of every register, in the pass-start registers.
        maps: Vec<RationalFunction>,
        /// `tails[i][j]`: register `i` at offset `j`, from the current pass on.
        tails: Vec<Vec<OffsetTail>>,
        pcs: BTreeSet<usize>,
    },
    NoCycleYet,
    Unclassifiable(Option<usize>),
}

/// Finds the least cycle at the end of `history` and certifies it.
pub fn accelerate(p: &Program, history: &[Snapshot], passes: usize) -> Acceleration {
    let Some(n) = history.len().checked_sub(1) else { return Acceleration::NoCycleYet };
    if let Some(first) = (0..n).rev().find(|&j| history[j] == history[n]) {
        return accelerate_exact(history, first);
    }
    for period in 1..=n / passes.max(1) {
        if pcs_periodic(history, period, passes) {
            return accelerate_period(p, history, period, passes, true);
        }
    }
    Acceleration::NoCycleYet
}

fn pcs_periodic(history: &[Snapshot], period: usize, passes: usize) -> bool {
    let n = history.len() - 1;
    n >= passes * period && (n + 1 - passes * period..=n).all(|t| history[t].pc == history[t - period].pc)
}

/// A snapshot recurring exactly: every offset is constant.
pub(crate) fn accelerate_exact(history: &[Snapshot], first: usize) -> Acceleration {
    let n = history.len() - 1;
    let period = n - first;
    let regs = history[n].registers.len();
    let tails = (0..regs)
        .map(|i| (0..period).map(|j| OffsetTail::Constant(history[first + j].registers[i].clone())).collect())
        .collect();
    let maps = (0..regs).map(RationalFunction::var).collect();
    let pcs = history[first..n].iter().map(|s| s.pc).collect();
    Acceleration::Accepted { cycle: Cycle { start: n, period }, maps, tails, pcs }
}

struct Classifier<'a> {
    history: &'a [Snapshot],
    n: usize,
    period: usize,
    passes: usize,
    consts: Vec<Option<Rational>>,
    reduced: Vec<RationalFunction>,
}

impl Classifier<'_> {
    fn subst(&self, g: &RationalFunction) -> Option<RationalFunction> {
        let s: Vec<RationalFunction> = self
            .consts
            .iter()
            .enumerate()
            .map(|(v, c)| c.clone().map_or_else(|| RationalFunction::var(v), RationalFunction::constant))
            .collect();
        g.compose(&s).ok()
    }

    fn start(&self, back: usize) -> &Snapshot {
        &self.history[self.n - back * self.period]
    }

    /// Pass-start values of `reg`, beginning `back` passes ago.
    fn track_at(&self, reg: usize, back: usize) -> OffsetTail {
        if let Some(c) = &self.consts[reg] {
            return OffsetTail::Constant(c.clone());
        }
        if back >= self.passes {
            return OffsetTail::Unclassified;
        }
        let g = &self.reduced[reg];
        let vars = g.vars();
        let snap = self.start(back);
        let s = snap.registers[reg].clone();
        if vars == [reg] {
            if g.eval(&snap.registers).ok().as_ref() == Some(&s) {
                return OffsetTail::Constant(s);
            }
            return match g.as_mobius_in(reg) {
                Some(m) => orbit(m, s),
                None => OffsetTail::Unclassified,
            };
        }
        if vars.contains(&reg) {
            return self.accumulator(reg, back).unwrap_or(OffsetTail::Unclassified);
        }
        self.track_of(g, back + 1)
    }

    /// Rewrites `g` through the previous pass when that leaves fewer variables.
    fn one_pass_back(&self, g: &RationalFunction, vars: &[usize], back: usize) -> Option<OffsetTail> {
        let h = g.compose(&self.reduced).ok()?;
        (h.vars().len() < vars.len()).then(|| self.track_of(&h, back + 1))
    }

    /// Values of `g` evaluated at pass starts, beginning `back` passes ago.
    fn track_of(&self, g: &RationalFunction, back: usize) -> OffsetTail {
        let vars = g.vars();
        match vars.as_slice() {
            [] => OffsetTail::Constant(g.as_constant().expect("no variables")),
            [m] => {
                let mut s: Vec<RationalFunction> = (0..self.consts.len()).map(RationalFunction::var).collect();
                s[*m] = RationalFunction::var(0);
                match g.compose(&s) {
                    Ok(f) => image(f, self.track_at(*m, back)),
                    Err(_) => OffsetTail::Unclassified,
                }
            }
            _ => {
                if let Some(t) = self.one_pass_back(g, &vars, back) {
                    return t;
                }
                if let Some(t) = self.linear_combination(g, back) {
                    return t;
                }
                if let Some(t) = self.separable(g, back) {
                    return t;
                }
                let mut point = vec![Rational::zero(); self.consts.len()];
                for &v in &vars {
                    match self.track_at(v, back).limit() {
                        Some(l) => point[v] = l,
                        None => return OffsetTail::Unclassified,
                    }
                }
                g.eval(&point).map_or(OffsetTail::Unclassified, OffsetTail::Converges)
            }
        }
    }
}

impl Classifier<'_> {
    /// A polynomial `g` with `g∘Φ = a*g + b` is itself an affine orbit.
    fn linear_combination(&self, g: &RationalFunction, back: usize) -> Option<OffsetTail> {
        if !g.is_polynomial() || back >= self.passes {
            return None;
        }
        let h = g.compose(&self.reduced).ok()?;
        if !h.is_polynomial() {
            return None;
        }
        let (gm, gc) = g.numer().leading()?;
        let (hm, hc) = h.numer().leading()?;
        if gm != hm {
            return None;
        }
        let a = div(hc, gc);
        let rest = h.sub(&g.mul(&RationalFunction::constant(a.clone())));
        let b = rest.as_constant()?;
        let start = g.eval(&self.start(back).registers).ok()?;
        Some(orbit([a, b, Rational::zero(), Rational::one()], start))
    }
}

impl Classifier<'_> {
    /// A polynomial whose monomials each use one variable is the sum of
    /// its univariate parts.
    fn separable(&self, g: &RationalFunction, back: usize) -> Option<OffsetTail> {
        if !g.is_polynomial() {
            return None;
        }
        let mut parts: Vec<(usize, Vec<(Monomial, Rational)>)> = Vec::new();
        let mut constant = Rational::zero();
        for (m, c) in g.numer().terms() {
            let used: Vec<usize> = m.exps().iter().enumerate().filter(|(_, e)| **e > 0).map(|(v, _)| v).collect();
            match used.as_slice() {
                [] => constant = constant + c,
                [v] => {
                    let mono = (Monomial::from_exps(vec![m.exp(*v)]), c.clone());
                    match parts.iter_mut().find(|(w, _)| w == v) {
                        Some((_, terms)) => terms.push(mono),
                        None => parts.push((*v, vec![mono])),
                    }
                }
                _ => return None,
            }
        }
        let mut tails = vec![OffsetTail::Constant(constant)];
        for (v, terms) in parts {
            let f = RationalFunction::from_poly(Poly::from_terms(terms));
            let t = image(f, self.track_at(v, back));
            if matches!(t, OffsetTail::Unclassified) {
                return None;
            }
            tails.push(t);
        }
        Some(OffsetTail::Sum(tails))
    }

    /// `r' = alpha*r + beta*x + gamma` with `x' = p*x + q`: the combination
    /// `r + c*x` with `c = beta / (alpha - p)` is an affine orbit, so `r` is
    /// that orbit minus `c*x`.
    fn accumulator(&self, reg: usize, back: usize) -> Option<OffsetTail> {
        let g = &self.reduced[reg];
        if !g.is_polynomial() || g.numer().total_degree() > 1 || back >= self.passes {
            return None;
        }
        let vars = g.vars();
        let [x] = vars.iter().copied().filter(|v| *v != reg).collect::<Vec<_>>()[..] else { return None };
        let coeff = |v: usize| {
            g.numer().terms().find(|(m, _)| m.exp(v) == 1).map_or_else(Rational::zero, |(_, c)| c.clone())
        };
        let (alpha, beta) = (coeff(reg), coeff(x));
        let gamma = g.numer().terms().find(|(m, _)| m.degree() == 0).map_or_else(Rational::zero, |(_, c)| c.clone());
        let hx = &self.reduced[x];
        if hx.vars() != [x] {
            return None;
        }
        let (p, q) = hx.as_affine_in(x)?;
        if alpha == p {
            return None;
        }
        let c = div(&beta, &(&alpha - &p));
        let snap = self.start(back);
        let start = &snap.registers[reg] + &(&c * &snap.registers[x]);
        let inv = orbit([alpha, gamma + &c * &q, Rational::zero(), Rational::one()], start);
        let minus_cx = RationalFunction::constant(-c).mul(&RationalFunction::var(0));
        Some(OffsetTail::Sum(vec![inv, image(minus_cx, self.track_at(x, back))]))
    }
}

fn div(a: &Rational, b: &Rational) -> Rational {
    a.checked_div(b).expect("nonzero divisor")
}

fn orbit(m: [Rational; 4], start: Rational) -> OffsetTail {
    if m[2].is_zero() {
        if m[3].is_zero() {
            return OffsetTail::Unclassified;
        }
        OffsetTail::AffineOrbit { a: div(&m[0], &m[3]), b: div(&m[1], &m[3]), start }
    } else {
        OffsetTail::MobiusOrbit { m, start }
    }
}

fn image(f: RationalFunction, inner: OffsetTail) -> OffsetTail {
    if let Some(c) = f.as_constant() {
        return OffsetTail::Constant(c);
    }
    if f == RationalFunction::var(0) {
        return inner;
    }
    let conj = f.as_mobius_in(0).filter(|[a, b, c, d]| !(a * d - b * c).is_zero());
    let m = match &inner {
        OffsetTail::AffineOrbit { a, b, .. } => Some([a.clone(), b.clone(), Rational::zero(), Rational::one()]),
        OffsetTail::MobiusOrbit { m, .. } => Some(m.clone()),
        _ => None,
    };
    if let (Some(fm), Some(m), OffsetTail::AffineOrbit { start, .. } | OffsetTail::MobiusOrbit { start, .. }) =
        (conj, m, &inner)
    {
        let Ok(s) = f.eval(std::slice::from_ref(start)) else { return OffsetTail::Unclassified };
        let inv = [fm[3].clone(), -fm[1].clone(), -fm[2].clone(), fm[0].clone()];
        return orbit(mat_mul(&mat_mul(&fm, &m), &inv), s);
    }
    OffsetTail::Image { f, inner: Box::new(inner) }
}

fn mat_mul(p: &[Rational; 4], q: &[Rational; 4]) -> [Rational; 4] {
    [
        &p[0] * &q[0] + &p[1] * &q[2],
        &p[0] * &q[1] + &p[1] * &q[3],
        &p[2] * &q[0] + &p[3] * &q[2],
        &p[2] * &q[1] + &p[3] * &q[3],
    ]
}

enum Check {
    Ok,
    Later,
    Fail,
}

fn branch_check(d: &OffsetTail, le: bool) -> Check {
    let holds = |x: &Rational| (*x <= Rational::zero()) == le;
    let shape = d.shape();
    match &shape {
        Shape::Fixed(c) => return if holds(c) { Check::Ok } else { Check::Later },
        Shape::Cycle(v) => return if v.iter().all(holds) { Check::Ok } else { Check::Later },
        Shape::Irregular => return Check::Fail,
        _ => {}
    }
    let Some(set) = d.limit_set() else { return Check::Fail };
    let (lo, hi) = d.hull();
    let zero = super::Ext::Finite(Rational::zero());
    if d.limit().is_some_and(|l| l.is_zero()) && d.limit_unattained() {
        let strict = if le { hi.is_some_and(|h| h <= zero) } else { lo.is_some_and(|l| l >= zero) };
        return if strict { Check::Ok } else { Check::Later };
    }
    if set.finite_points.contains(&Rational::zero()) {
        return Check::Fail;
    }
    let bound = if le { hi.map(|h| h <= zero) } else { lo.map(|l| l > zero) };
    let limit_side = match shape {
        Shape::Converges { limit, .. } => Some(holds(&limit)),
        Shape::Up { .. } => Some(!le),
        Shape::Down { .. } => Some(le),
        _ => None,
    };
    match (bound, limit_side) {
        (Some(true), _) => Check::Ok,
        (Some(false), _) => Check::Later,
        (None, Some(true)) => Check::Ok,
        _ => Check::Later,
    }
}

fn divisor_check(d: &OffsetTail) -> Check {
    if d.never_zero() {
        return Check::Ok;
    }
    match (d.hull(), d.limit()) {
        (_, Some(l)) if l.is_zero() => Check::Fail,
        ((None, None), Some(_)) => Check::Ok,
        (_, _) if matches!(d.shape(), Shape::Irregular) => Check::Fail,
        _ => Check::Later,
    }
}

/// Certifies the cycle of length `period` ending at the last snapshot.
pub(crate) fn accelerate_period(
    p: &Program,
    history: &[Snapshot],
    period: usize,
    passes: usize,
    spot_check: bool,
) -> Acceleration {
    let n = history.len() - 1;
    if n < passes * period {
        return Acceleration::NoCycleYet;
    }
    let regs = history[n].registers.len();
    let mut state: Vec<RationalFunction> = (0..regs).map(RationalFunction::var).collect();
    let mut psi = Vec::with_capacity(period);
    let mut branches = Vec::new();
    let mut divisors = Vec::new();
    for j in 0..period {
        psi.push(state.clone());
        let here = &history[n - period + j];
        match p.get(here.pc) {
            Some(Instruction::Compute { target, expr }) => {
                for d in expr.divisors() {
                    match d.to_ratfun().and_then(|f| f.compose(&state)) {
                        Ok(f) => divisors.push(f),
                        Err(_) => return Acceleration::Unclassifiable(None),
                    }
                }
                match expr.to_ratfun().and_then(|f| f.compose(&state)) {
                    Ok(f) => state[*target] = f,
                    Err(_) => return Acceleration::Unclassifiable(Some(*target)),
                }
            }
            Some(Instruction::Branch { left, right, .. }) if left != right => {
                let le = here.registers[*left] <= here.registers[*right];
                branches.push((j, *left, *right, le));
            }
            Some(Instruction::Branch { .. }) => {}
            _ => return Acceleration::NoCycleYet,
        }
    }
    let comparisons: Vec<(RationalFunction, bool, usize)> =
        branches.iter().map(|(j, l, r, le)| (psi[*j][*l].sub(&psi[*j][*r]), *le, *l)).collect();
    let tails = match certify(history, period, passes, &state, &psi, &comparisons, &divisors) {
        Ok(found) => found,
        Err(Acceleration::Unclassifiable(r)) => {
            match certify_conjugated(history, period, passes, &state, &psi, &comparisons, &divisors) {
                Some(Ok(found)) => found,
                Some(Err(Acceleration::NoCycleYet)) => return Acceleration::NoCycleYet,
                _ => return Acceleration::Unclassifiable(r),
            }
        }
        Err(e) => return e,
    };
    if spot_check {
        if let Some(bad) = spot_mismatch(p, history, period, &tails) {
            return Acceleration::Unclassifiable(Some(bad));
        }
    }
    let pcs = history[n - period..n].iter().map(|s| s.pc).collect();
    Acceleration::Accepted { cycle: Cycle { start: n, period }, maps: state, tails, pcs }
}

type Certified = Vec<Vec<OffsetTail>>;

/// Checks that the branches and divisors keep behaving, then classifies
/// every register at every cycle offset.
fn certify(
    history: &[Snapshot],
    period: usize,
    passes: usize,
    state: &[RationalFunction],
    psi: &[Vec<RationalFunction>],
    comparisons: &[(RationalFunction, bool, usize)],
    divisors: &[RationalFunction],
) -> Result<Certified, Acceleration> {
    let n = history.len() - 1;
    let regs = state.len();
    let unclassifiable = |r| Err(Acceleration::Unclassifiable(r));
    let mut c = Classifier { history, n, period, passes, consts: vec![None; regs], reduced: state.to_vec() };
    loop {
        let mut changed = false;
        for i in 0..regs {
            if c.consts[i].is_some() {
                continue;
            }
            let Some(g) = c.subst(&state[i]) else { return unclassifiable(Some(i)) };
            let cur = &history[n].registers[i];
            let fixed = g == RationalFunction::var(i) || g.as_constant().as_ref() == Some(cur);
            c.reduced[i] = g;
            if fixed {
                c.consts[i] = Some(cur.clone());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let reduce = |f: &RationalFunction| c.subst(f).map(|g| c.track_of(&g, 0));
    let mut later = false;
    let mut failed = None;
    for (d, le, reg) in comparisons {
        match reduce(d).map(|d| branch_check(&d, *le)) {
            Some(Check::Ok) => {}
            Some(Check::Later) => later = true,
            _ => failed = failed.or(Some(Some(*reg))),
        }
    }
    for f in divisors {
        match reduce(f).map(|d| divisor_check(&d)) {
            Some(Check::Ok) => {}
            Some(Check::Later) => later = true,
            _ => failed = failed.or(Some(None)),
        }
    }
    if later {
        return Err(Acceleration::NoCycleYet);
    }
    if let Some(r) = failed {
        return unclassifiable(r);
    }
    let mut tails = vec![Vec::with_capacity(period); regs];
    for step_state in psi {
        for (i, f) in step_state.iter().enumerate() {
            match reduce(f) {
                Some(t) if t.limit_set().is_some() => tails[i].push(t),
                _ => return unclassifiable(Some(i)),
            }
        }
    }
    Ok(tails)
}

/// The two rational branches of `x -> 1/2 + x/(2(1 + |x|))`, each with its
/// inverse, as functions of `R1`.
fn chart(upper: bool) -> (RationalFunction, RationalFunction) {
    let x = RationalFunction::var(0);
    let k = |v: i64| RationalFunction::constant(Rational::from_int(v));
    let two_x = k(2).mul(&x);
    let (fwd, inv) = if upper {
        (two_x.add(&k(1)).div(&two_x.add(&k(2))), two_x.sub(&k(1)).div(&k(2).sub(&two_x)))
    } else {
        (k(1).div(&k(2).sub(&two_x)), two_x.sub(&k(1)).div(&two_x))
    };
    (fwd.expect("nonzero denominator"), inv.expect("nonzero denominator"))
}

/// Retries [`certify`] after moving every register that stays strictly
/// inside one half of `(0, 1)` back to the whole line through [`chart`].
fn certify_conjugated(
    history: &[Snapshot],
    period: usize,
    passes: usize,
    state: &[RationalFunction],
    psi: &[Vec<RationalFunction>],
    comparisons: &[(RationalFunction, bool, usize)],
    divisors: &[RationalFunction],
) -> Option<Result<Certified, Acceleration>> {
    let n = history.len() - 1;
    let window = &history[n - passes * period..];
    let regs = state.len();
    let half = Rational::new(1, 2).expect("nonzero");
    let charts: Vec<Option<bool>> = (0..regs)
        .map(|i| {
            let vals: Vec<&Rational> = window.iter().map(|s| &s.registers[i]).collect();
            if vals.iter().all(|v| *v == vals[0]) || !vals.iter().all(|v| v.is_positive() && **v < Rational::one()) {
                return None;
            }
            if vals.iter().all(|v| **v >= half) {
                Some(true)
            } else if vals.iter().all(|v| **v <= half) {
                Some(false)
            } else {
                None
            }
        })
        .collect();
    if charts.iter().all(Option::is_none) {
        return None;
    }
    let maps: Vec<Option<(RationalFunction, RationalFunction)>> = charts.iter().map(|c| c.map(chart)).collect();
    let sub: Vec<RationalFunction> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| match m {
            Some((fwd, _)) => fwd.compose(&[RationalFunction::var(i)]).expect("univariate"),
            None => RationalFunction::var(i),
        })
        .collect();
    let pull = |f: &RationalFunction| f.compose(&sub).ok();
    let pull_reg = |i: usize, f: &RationalFunction| {
        let g = pull(f)?;
        match &maps[i] {
            Some((_, inv)) => inv.compose(&[g]).ok(),
            None => Some(g),
        }
    };
    let local: Vec<Snapshot> = window
        .iter()
        .map(|s| {
            let registers = s
                .registers
                .iter()
                .enumerate()
                .map(|(i, v)| match &maps[i] {
                    Some((_, inv)) => inv.eval(&[v.clone()]).expect("inside the chart"),
                    None => v.clone(),
                })
                .collect();
            Snapshot { registers, pc: s.pc }
        })
        .collect();
    let state: Vec<RationalFunction> = state.iter().enumerate().map(|(i, f)| pull_reg(i, f)).collect::<Option<_>>()?;
    let psi: Vec<Vec<RationalFunction>> = psi
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, f)| pull_reg(i, f)).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let comparisons: Vec<_> =
        comparisons.iter().map(|(d, le, r)| Some((pull(d)?, *le, *r))).collect::<Option<_>>()?;
    let divisors: Vec<_> = divisors.iter().map(pull).collect::<Option<_>>()?;
    let tails = match certify(&local, period, passes, &state, &psi, &comparisons, &divisors) {
        Ok(found) => found,
        Err(e) => return Some(Err(e)),
    };
    let mut out = Vec::with_capacity(regs);
    for (i, row) in tails.into_iter().enumerate() {
        let Some((fwd, _)) = &maps[i] else {
            out.push(row);
            continue;
        };
        let upper = charts[i] == Some(true);
        let mut wrapped = Vec::with_capacity(row.len());
        for t in row {
            let inside = match t.hull() {
                (Some(Ext::Finite(lo)), _) if upper => !lo.is_negative(),
                (_, Some(Ext::Finite(hi))) if !upper => !hi.is_positive(),
                _ => false,
            };
            if !inside {
                return Some(Err(Acceleration::Unclassifiable(Some(i))));
            }
            wrapped.push(image(fwd.clone(), t));
        }
        out.push(wrapped);
    }
    Some(Ok(out))
}

/// Runs four more passes concretely and compares with the predicted orbits.
fn spot_mismatch(p: &Program, history: &[Snapshot], period: usize, tails: &[Vec<OffsetTail>]) -> Option<usize> {
    let n = history.len() - 1;
    let mut s = history[n].clone();
    for t in 0..4 * period {
        let (k, j) = (t / period, t % period);
        if s.pc != history[n - period + j].pc {
            return Some(0);
        }
        for (i, v) in s.registers.iter().enumerate() {
            if let Some(expected) = tails[i][j].value(k) {
                if &expected != v {
                    return Some(i);
                }
            }
        }
        match step(p, &s) {
            StepOutcome::Next(next) => s = next,
            _ => return Some(0),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{limit_sets, InfFlag};
    use crate::lang::parse_program;

    fn history(p: &Program, steps: usize) -> Vec<Snapshot> {
        let mut h = vec![Snapshot::initial(p.registers(), &[])];
        for _ in 0..steps {
            match step(p, h.last().unwrap()) {
                StepOutcome::Next(s) => h.push(s),
                _ => break,
            }
        }
        h
    }

    #[test]
    fn increment_loop_is_monotone() {
        let p = parse_program("registers 2\n0: R2 := R2 + 1\n1: goto 0\n").unwrap();
        let h = history(&p, 20);
        let Acceleration::Accepted { cycle, maps, tails, .. } = accelerate(&p, &h, 8) else { panic!() };
        assert_eq!(cycle.period, 2);
        assert_eq!(maps[1].as_affine_in(1), Some((Rational::one(), Rational::one())));
        assert_eq!(limit_sets(&tails).unwrap()[1].plus_inf, InfFlag::StrongLimit);
    }

    #[test]
    fn unreached_fixed_point_keeps_branch() {
        let p = parse_program("registers 3\n0: R3 := 2\n1: R2 := R2/2 + 1\n2: if R2 <= R3 goto 1 else goto 3\n3: halt\n").unwrap();
        let h = history(&p, 40);
        let r = accelerate(&p, &h, 8);
        let Acceleration::Accepted { tails, .. } = r else { panic!("{r:?}") };
        assert_eq!(tails[1][0].limit(), Some(Rational::from_int(2)));
    }

    #[test]
    fn no_cycle_yet() {
        let p = parse_program("registers 2\n0: R2 := R2 + 1\n1: goto 0\n").unwrap();
        let h = history(&p, 5);
        assert!(matches!(accelerate(&p, &h, 8), Acceleration::NoCycleYet));
    }

    #[test]
    fn copies_follow_their_source() {
        let p = parse_program("registers 3\n0: R2 := R2/2 + 1\n1: R3 := R2\n2: goto 0\n").unwrap();
        let h = history(&p, 40);
        let Acceleration::Accepted { tails, .. } = accelerate(&p, &h, 8) else { panic!() };
        let sets = limit_sets(&tails).unwrap();
        assert_eq!(sets[2].is_cauchy(), Some(&Rational::from_int(2)));
    }

    #[test]
    fn accumulated_geometric_series_converges() {
        let src = "registers 3\n0: R3 := 1\n1: R2 := R2 + R3\n2: R3 := R3 / 2\n3: goto 1\n";
        let p = parse_program(src).unwrap();
        let h = history(&p, 40);
        let r = accelerate(&p, &h, 8);
        let Acceleration::Accepted { tails, .. } = r else { panic!("{r:?}") };
        assert_eq!(tails[1][0].limit(), Some(Rational::from_int(2)));
        assert_eq!(tails[2][0].limit(), Some(Rational::zero()));
    }

    #[test]
    fn bounded_copy_against_counter() {
        let src = "registers 3\n0: R2 := R2 / 2 + 1\n1: R3 := R3 + 1\n2: R1 := R2 - R3\n3: goto 0\n";
        let p = parse_program(src).unwrap();
        let h = history(&p, 40);
        let r = accelerate(&p, &h, 8);
        let Acceleration::Accepted { tails, .. } = r else { panic!("{r:?}") };
        assert!(matches!(tails[0][0].shape(), Shape::Down { .. }));
    }
}
