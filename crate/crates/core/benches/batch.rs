use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tbss_core::batch::{run_batch, run_batch_sequential, Job};
use tbss_core::engine::{RunConfig, Variant};
use tbss_core::lang::parse_program;
use tbss_core::number::Rational;

/// A mix of finite loops and programs that need limit stages.
fn jobs(n: usize) -> Vec<Job> {
    let sources = [
        "registers 2\n0: R2 := R2 + 1\n1: goto 0\n",
        "registers 4\n0: R4 := 1/2\n1: R2 := R2 + 1\n2: if R2 <= R4 goto 5 else goto 3\n3: R2 := R2 + 1\n4: goto 2\n5: halt\n",
        "registers 3\n0: R3 := 50\n1: R2 := R2 + 1\n2: R1 := R1 + R2 / 3\n3: if R2 <= R3 goto 1 else goto 4\n4: halt\n",
        "registers 2\n0: R2 := R2 / 2 + 1\n1: goto 0\n",
    ];
    (0..n)
        .map(|k| {
            let p = parse_program(sources[k % sources.len()]).unwrap();
            Job::new(p, vec![Rational::from_int(k as i64)])
        })
        .collect()
}

fn bench(c: &mut Criterion) {
    let cfg = RunConfig::new(Variant::Sitbm);
    let mut g = c.benchmark_group("batch");
    for n in [8usize, 64] {
        let js = jobs(n);
        g.bench_with_input(BenchmarkId::new("parallel", n), &js, |b, js| b.iter(|| run_batch(black_box(js), &cfg)));
        g.bench_with_input(BenchmarkId::new("sequential", n), &js, |b, js| {
            b.iter(|| run_batch_sequential(black_box(js), &cfg))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
