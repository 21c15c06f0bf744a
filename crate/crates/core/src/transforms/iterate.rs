use std::collections::BTreeMap;

use crate::codec::{interleave_ranked, real_to_seq, seq_to_real, Bits};
use crate::engine::{run_with, RunConfig, Variant, Verdict};
use crate::lang::Program;
use crate::number::Rational;
use crate::ordinal::{canonical_enumeration, canonical_index, code_to_ordinal, rho_inv, OrderCode, Ordinal};

use super::TransformError;

/// Successor steps tried inside one block `[w*j, w*(j+1))` before the
/// iterates are required to have settled on a fixed point.
const SETTLE_LIMIT: u64 = 256;

/// Prefix of the order code inspected when checking it against `theta`.
const CODE_BOUND: usize = 12;

/// Result of iterating up to some stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationOutcome {
    pub value: Rational,
    /// Number of engine runs performed.
    pub runs: u64,
}

/// Iterates inside one block: the value at `w*j` and the run of
/// successors until a fixed point shows up.
#[derive(Clone, Debug)]
struct Block {
    values: Vec<Rational>,
    settled: bool,
}

impl Block {
    fn at(&self, n: u64) -> &Rational {
        let i = (n as usize).min(self.values.len() - 1);
        &self.values[i]
    }
}

struct Stages<'a> {
    f: &'a Program,
    cfg: RunConfig,
    blocks: Vec<Block>,
    runs: u64,
}

impl<'a> Stages<'a> {
    fn new(f: &'a Program, variant: Variant, budget: Ordinal) -> Self {
        Stages { f, cfg: RunConfig::new(variant).budget(budget), blocks: Vec::new(), runs: 0 }
    }

    fn apply(&mut self, x: &Rational, stage: Ordinal) -> Result<Rational, TransformError> {
        self.runs += 1;
        match run_with(self.f, std::slice::from_ref(x), &self.cfg).verdict {
            Verdict::Halted { output, .. } => Ok(output),
            _ => Err(TransformError::StepDiverged(stage)),
        }
    }

    /// Extends block `j` until it holds `n + 1` values or has settled.
    fn grow(&mut self, j: usize, n: u64) -> Result<(), TransformError> {
        loop {
            let b = &self.blocks[j];
            if b.settled || b.values.len() as u64 > n {
                return Ok(());
            }
            let k = b.values.len() as u64;
            let last = b.values[b.values.len() - 1].clone();
            let stage = Ordinal::from_coeffs(&[k, j as u64]);
            let next = self.apply(&last, stage)?;
            let b = &mut self.blocks[j];
            b.settled = next == last;
            if !b.settled {
                b.values.push(next);
            }
        }
    }

    fn settle(&mut self, j: usize, lambda: &Ordinal) -> Result<(), TransformError> {
        self.grow(j, SETTLE_LIMIT)?;
        if self.blocks[j].settled {
            Ok(())
        } else {
            Err(TransformError::NonPeriodicResult(lambda.clone()))
        }
    }

    /// Opens blocks up to and including `j`.
    fn open(&mut self, j: usize) -> Result<(), TransformError> {
        while self.blocks.len() <= j {
            let start = if self.blocks.is_empty() {
                Rational::zero()
            } else {
                let m = self.blocks.len() as u64;
                self.limit_value(&Ordinal::from_coeffs(&[0, m]))?
            };
            self.blocks.push(Block { values: vec![start], settled: false });
        }
        Ok(())
    }

    fn value(&mut self, alpha: &Ordinal) -> Result<Rational, TransformError> {
        let c = alpha.coeffs().unwrap_or_default();
        let n = c.first().copied().unwrap_or(0);
        let j = c.get(1).copied().unwrap_or(0) as usize;
        self.open(j)?;
        self.grow(j, n)?;
        Ok(self.blocks[j].at(n).clone())
    }

    /// `(+)` of all iterates below `w*m`, exact when only finitely many of
    /// them are nonzero.
    fn limit_value(&mut self, lambda: &Ordinal) -> Result<Rational, TransformError> {
        let m = lambda.coeffs().and_then(|c| c.get(1).copied()).unwrap_or(0) as usize;
        let mut strands = Vec::new();
        for j in 0..m {
            self.open(j)?;
            self.settle(j, lambda)?;
            let b = &self.blocks[j];
            if !b.values[b.values.len() - 1].is_zero() {
                return Err(TransformError::NonPeriodicResult(lambda.clone()));
            }
            for (n, v) in b.values.iter().enumerate() {
                let alpha = Ordinal::from_coeffs(&[n as u64, j as u64]);
                let rank = canonical_index(lambda, &alpha).expect("alpha below lambda");
                strands.push((rank, real_to_seq(v)?));
            }
        }
        Ok(seq_to_real(&interleave_ranked(&strands)?))
    }
}

fn check_theta(theta: &Ordinal, code: &OrderCode) -> Result<(), TransformError> {
    match theta.coeffs() {
        Some(c) if c.len() <= 2 => {}
        _ => return Err(TransformError::CodeMismatch),
    }
    match code_to_ordinal(code, CODE_BOUND) {
        Ok(o) if o == *theta || agrees(&o, theta) => Ok(()),
        _ => Err(TransformError::CodeMismatch),
    }
}

/// True when both ordinals enumerate the same prefix.
fn agrees(a: &Ordinal, b: &Ordinal) -> bool {
    let ea = canonical_enumeration(a, CODE_BOUND);
    let eb = canonical_enumeration(b, CODE_BOUND);
    ea.is_some() && ea == eb
}

/// `f^theta(0)` with limits taken as `(+)` over the canonical enumeration.
///
/// Stages run `f` through the engine under `variant` with `budget`.
/// Values at limit stages must be eventually periodic; this holds when
/// each earlier block of iterates settles on the fixed point 0.
pub fn iterate(
    f: &Program,
    theta: &Ordinal,
    code: &OrderCode,
    variant: Variant,
    budget: Ordinal,
) -> Result<IterationOutcome, TransformError> {
    check_theta(theta, code)?;
    let mut it = Stages::new(f, variant, budget);
    let value = it.value(theta)?;
    Ok(IterationOutcome { value, runs: it.runs })
}

/// The first `bits` bits of `f^lambda(0)` for a limit `lambda`, computed
/// exactly even when the full value is not eventually periodic.
///
/// Every iterate below `lambda` must itself be an exact rational.
pub fn iterate_prefix(
    f: &Program,
    lambda: &Ordinal,
    code: &OrderCode,
    variant: Variant,
    budget: Ordinal,
    bits: usize,
) -> Result<Vec<bool>, TransformError> {
    check_theta(lambda, code)?;
    if !lambda.is_limit() {
        return Err(TransformError::CodeMismatch);
    }
    let mut it = Stages::new(f, variant, budget);
    let positions: Vec<(u64, u64)> = (0..bits as u64).map(rho_inv).collect();
    let ranks = positions.iter().map(|p| p.1).max().map_or(0, |k| k + 1) as usize;
    let order = canonical_enumeration(lambda, ranks).ok_or(TransformError::CodeMismatch)?;
    let mut cache: BTreeMap<u64, Bits> = BTreeMap::new();
    let mut out = Vec::with_capacity(bits);
    for (i, k) in positions {
        if !cache.contains_key(&k) {
            let v = it.value(&order[k as usize])?;
            cache.insert(k, real_to_seq(&v)?);
        }
        out.push(cache[&k].get(i as usize));
    }
    Ok(out)
}
