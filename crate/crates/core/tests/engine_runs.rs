use tbss_core::engine::{run_with, CrashReason, RunConfig, Variant, Verdict};
use tbss_core::lang::parse_program;
use tbss_core::number::Rational;
use tbss_core::ordinal::Ordinal;

const CLOCK: &str = "registers 4
0: R4 := 1/2
1: R2 := R2 + 1
2: if R2 <= R4 goto 5 else goto 3
3: R2 := R2 + 1
4: if R1 <= R1 goto 2 else goto 2
5: halt
";

const COUNTER: &str = "registers 2\n0: R2 := R2 + 1\n1: goto 0\n";

fn w(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn go(src: &str, v: Variant) -> Verdict {
    run_with(&parse_program(src).unwrap(), &[], &RunConfig::new(v)).verdict
}

#[test]
fn clock_halts_at_omega_plus_one() {
    assert_eq!(go(CLOCK, Variant::Sitbm), Verdict::Halted { stage: w("w+1"), output: Rational::zero() });
}

#[test]
fn counter_strong_loop() {
    assert_eq!(go(COUNTER, Variant::Sitbm), Verdict::Diverged { loop_start: w("0"), loop_end: w("w") });
    assert_eq!(go(COUNTER, Variant::Itbm), Verdict::Crashed { stage: w("w"), reason: CrashReason::UndefinedLimit });
}

#[test]
fn oscillation_separates_variants() {
    let src = "registers 2\n0: R2 := -2*R2 + 1\n1: goto 0\n";
    assert_eq!(go(src, Variant::Sitbm), Verdict::Crashed { stage: w("w"), reason: CrashReason::EmptyStrongLimitSet });
    let res = run_with(&parse_program(src).unwrap(), &[], &RunConfig::new(Variant::Ssitbm).budget(w("w*3")));
    assert!(matches!(res.verdict, Verdict::BudgetExhausted { .. }), "{}", res.verdict);
    let at_omega = res.trace.iter().find(|r| r.stage == w("w")).unwrap();
    assert_eq!(at_omega.snapshot.registers[1], Rational::zero());
}

#[test]
fn contracting_orbit_limit() {
    let src = "registers 3\n0: R2 := R2/2 + 1\n1: R3 := R3 + 1\n2: goto 0\n";
    for v in Variant::ALL {
        let res = run_with(&parse_program(src).unwrap(), &[], &RunConfig::new(v).budget(w("w")));
        let at_omega = res.trace.iter().find(|r| r.stage == w("w"));
        match v {
            Variant::Itbm | Variant::Bsitbm => {
                assert!(matches!(res.verdict, Verdict::Crashed { .. }), "{v}: {}", res.verdict)
            }
            _ => assert_eq!(at_omega.unwrap().snapshot.registers[1], Rational::from_int(2)),
        }
    }
}

#[test]
fn counter_of_limits_diverges() {
    let src = "registers 3
0: R3 := R3 + 1
1: R2 := R2 + 1
2: if R2 <= R2 goto 1 else goto 1
";
    let v = go(src, Variant::Sitbm);
    assert!(matches!(v, Verdict::Diverged { .. }), "{v}");
}

#[test]
fn halts_after_three_limits() {
    let src = "registers 4
0: R4 := 3
1: if R4 <= R3 goto 6 else goto 2
2: if R2 <= R1 goto 3 else goto 4
3: R3 := R3 + 1
4: R2 := R2 + 1
5: goto 1
6: halt
";
    let v = go(src, Variant::Sitbm);
    assert_eq!(v, Verdict::Halted { stage: w("w*2+6"), output: Rational::zero() });
}

#[test]
fn limit_counter_reset_at_omega_squared() {
    // R3 counts limit stages; it is reset to 0 at w^2, which is detected on line 1.
    let src = "registers 5
0: if R2 <= R4 goto 1 else goto 6
1: if R3 <= R4 goto 2 else goto 4
2: if R5 <= R4 goto 3 else goto 8
3: R5 := 1
4: R3 := R3 + 1
5: R2 := R2 + 1
6: R2 := R2 + 1
7: goto 0
8: halt
";
    assert_eq!(go(src, Variant::Sitbm), Verdict::Halted { stage: w("w^2+3"), output: Rational::zero() });
    assert_eq!(go(src, Variant::Ssitbm), Verdict::Halted { stage: w("w^2+3"), output: Rational::zero() });
    assert!(matches!(go(src, Variant::Bsitbm), Verdict::Crashed { .. }));
}

#[test]
fn coupled_increments_diverge() {
    let src = "registers 3
0: if R2 <= R1 goto 1 else goto 2
1: R1 := R1 + 1
2: R2 := R2 + 1
3: if R3 <= R1 goto 0 else goto 5
4: goto 0
5: halt
";
    assert_eq!(go(src, Variant::Sitbm), Verdict::Diverged { loop_start: w("0"), loop_end: w("w") });
}
