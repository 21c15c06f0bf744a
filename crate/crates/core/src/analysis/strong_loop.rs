use std::fmt;

use crate::engine::{Event, Floor, Snapshot, TraceRecord};
use crate::ordinal::Ordinal;

const WINDOW: usize = 64;

/// A recurring snapshot that stayed componentwise minimal in between.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopWitness {
    pub gamma: Ordinal,
    pub beta: Ordinal,
    pub delta: Ordinal,
}

impl LoopWitness {
    pub fn new(gamma: Ordinal, beta: Ordinal) -> Option<Self> {
        let delta = gamma.left_subtract(&beta)?;
        (!delta.is_zero()).then_some(LoopWitness { gamma, beta, delta })
    }
}

impl fmt::Display for LoopWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.gamma, self.beta, self.delta)
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    stage: Ordinal,
    snapshot: Snapshot,
    floor: Floor,
    pinned: bool,
}

/// Incremental strong-loop detector over a trace stream.
///
/// Limit records are always retained as candidates. Successor records are
/// retained for the first few steps after each limit and in a sliding
/// window of the most recent steps.
#[derive(Clone, Debug, Default)]
pub struct StrongLoopDetector {
    candidates: Vec<Candidate>,
    since_limit: usize,
}

impl StrongLoopDetector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds one record; returns the first witness it completes.
    pub fn observe(&mut self, rec: &TraceRecord) -> Option<LoopWitness> {
        if !matches!(rec.event, Event::Step | Event::Limit) {
            return None;
        }
        let mut found = None;
        self.candidates.retain_mut(|c| {
            c.floor.meet(&rec.floor);
            if !c.floor.dominates(&c.snapshot) {
                return false;
            }
            if found.is_none() && c.snapshot == rec.snapshot {
                found = LoopWitness::new(c.stage.clone(), rec.stage.clone());
            }
            true
        });
        if found.is_some() {
            return found;
        }
        let pinned = rec.event == Event::Limit || self.since_limit < WINDOW;
        self.since_limit = if rec.event == Event::Limit { 0 } else { self.since_limit + 1 };
        self.candidates.push(Candidate {
            stage: rec.stage.clone(),
            snapshot: rec.snapshot.clone(),
            floor: Floor::of(&rec.snapshot),
            pinned,
        });
        let loose = self.candidates.iter().filter(|c| !c.pinned).count();
        if loose > WINDOW {
            if let Some(pos) = self.candidates.iter().position(|c| !c.pinned) {
                self.candidates.remove(pos);
            }
        }
        None
    }
}

/// First strong loop completed in a recorded trace.
pub fn detect_strong_loop<'a>(trace: impl IntoIterator<Item = &'a TraceRecord>) -> Option<LoopWitness> {
    let mut d = StrongLoopDetector::new();
    trace.into_iter().find_map(|r| d.observe(r))
}
