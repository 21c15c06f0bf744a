//! Running many independent jobs at once.
//!
//! With the `parallel` feature (on by default) jobs are spread over the
//! rayon thread pool; without it they run one after another. Results keep
//! the order of the input either way.

use crate::engine::{run_with, RunConfig, RunResult};
use crate::lang::Program;
use crate::number::Rational;

/// A program together with its inputs.
#[derive(Clone, Debug)]
pub struct Job {
    pub program: Program,
    pub inputs: Vec<Rational>,
}

impl Job {
    pub fn new(program: Program, inputs: Vec<Rational>) -> Self {
        Job { program, inputs }
    }
}

/// Applies `f` to every item, in parallel when the feature is enabled.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Applies `f` to every item on the calling thread.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Runs every job under `cfg`.
pub fn run_batch(jobs: &[Job], cfg: &RunConfig) -> Vec<RunResult> {
    map(jobs, |j| run_with(&j.program, &j.inputs, cfg))
}

/// [`run_batch`] without threads.
pub fn run_batch_sequential(jobs: &[Job], cfg: &RunConfig) -> Vec<RunResult> {
    map_sequential(jobs, |j| run_with(&j.program, &j.inputs, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Variant;
    use crate::lang::parse_program;

    #[test]
    fn parallel_and_sequential_agree() {
        let jobs: Vec<Job> = (0..12)
            .map(|k| {
                let src = format!("registers 1\n0: R1 := R1 * {k} + 1\n1: halt\n");
                Job::new(parse_program(&src).unwrap(), vec![Rational::from_int(k)])
            })
            .collect();
        let cfg = RunConfig::new(Variant::Sitbm);
        let a: Vec<_> = run_batch(&jobs, &cfg).into_iter().map(|r| r.verdict).collect();
        let b: Vec<_> = run_batch_sequential(&jobs, &cfg).into_iter().map(|r| r.verdict).collect();
        assert_eq!(a, b);
        assert_eq!(a[3].output(), Some(&Rational::from_int(10)));
    }
}
