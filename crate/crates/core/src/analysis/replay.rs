use crate::engine::{run_with, Event, RunConfig, Snapshot, TraceLevel, Verdict};
use crate::lang::Program;
use crate::number::Rational;
use crate::ordinal::Ordinal;

use super::{AnalysisError, LoopWitness};

/// Re-runs `p` without loop detection and checks that the snapshot at
/// `gamma` recurs at `gamma + delta * k` for `k = 1..=repetitions`.
pub fn verify_loop_replay(
    p: &Program,
    inputs: &[Rational],
    witness: &LoopWitness,
    repetitions: u64,
    cfg: &RunConfig,
) -> Result<bool, AnalysisError> {
    let stages: Vec<Ordinal> = (0..=repetitions)
        .map(|k| witness.gamma.add(&witness.delta.mul(&Ordinal::nat(k))))
        .collect();
    let mut cfg = cfg.clone();
    cfg.detect_loops = false;
    cfg.trace = TraceLevel::All;
    cfg.budget = stages.last().expect("at least gamma").clone();
    let degree = cfg.budget.coeffs().map_or(cfg.depth, |c| c.len().saturating_sub(1));
    cfg.depth = cfg.depth.min(degree).max(1);
    let res = run_with(p, inputs, &cfg);
    if matches!(res.verdict, Verdict::Halted { .. }) {
        return Err(AnalysisError::Halts(res.verdict.stage().clone()));
    }
    let at = |stage: &Ordinal| -> Option<&Snapshot> {
        res.trace
            .iter()
            .find(|r| &r.stage == stage && matches!(r.event, Event::Step | Event::Limit))
            .map(|r| &r.snapshot)
    };
    let first = at(&stages[0]).ok_or_else(|| AnalysisError::ReplayMismatch(stages[0].clone()))?;
    for s in &stages[1..] {
        if at(s) != Some(first) {
            return Err(AnalysisError::ReplayMismatch(s.clone()));
        }
    }
    Ok(true)
}

/// The stage at which the first strong loop of `p` completes.
pub fn strong_looping_time(p: &Program, inputs: &[Rational], cfg: &RunConfig) -> Result<Ordinal, AnalysisError> {
    let mut cfg = cfg.clone();
    cfg.detect_loops = true;
    match run_with(p, inputs, &cfg).verdict {
        Verdict::Diverged { loop_end, .. } => Ok(loop_end),
        _ => Err(AnalysisError::NotFoundWithinBudget),
    }
}
