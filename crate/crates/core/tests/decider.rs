mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::decider_oracle::{halts_within, programs, to_program};
use tbss_core::analysis::{halting_decider, Decision};
use tbss_core::lang::encode_program;
use tbss_core::number::Rational;
use tbss_core::ordinal::Ordinal;

#[test]
fn sample_agrees_with_reachability() {
    let universe: BTreeSet<Rational> = [Rational::zero(), Rational::one()].into();
    let budget: Ordinal = "w^3".parse().unwrap();
    let t = Instant::now();
    let mut n = 0;
    for (regs, lines) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)] {
        for ops in programs(regs, lines) {
            let p = to_program(regs, &ops);
            let d = halting_decider(&encode_program(&p), &universe, budget.clone())
                .unwrap_or_else(|e| panic!("{p}: {e}"));
            let want = if halts_within(&ops, 3) { Decision::Halts } else { Decision::Diverges };
            assert_eq!(d, want, "{p}");
            n += 1;
        }
    }
    eprintln!("{n} programs in {:?}", t.elapsed());
}
