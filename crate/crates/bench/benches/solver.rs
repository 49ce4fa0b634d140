use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use msroot_bench::{bench_methods, bench_system};
use msroot_core::{build_macaulay, solve};

fn solve_methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(20);
    for (n, degree) in [(2, 2), (3, 2), (2, 4)] {
        let sys = bench_system(n, degree);
        for m in bench_methods() {
            let id = BenchmarkId::new(m.label(), format!("n{n}_deg{degree}"));
            group.bench_with_input(id, &sys, |b, sys| b.iter(|| solve(black_box(sys), &m).unwrap()));
        }
    }
    group.finish();
}

fn macaulay_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_macaulay");
    for (n, degree) in [(2, 3), (3, 3), (4, 2)] {
        let sys = bench_system(n, degree);
        let d = sys.macaulay_degree();
        group.bench_function(format!("n{n}_deg{degree}"), |b| {
            b.iter(|| build_macaulay(black_box(&sys), d).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, solve_methods, macaulay_build);
criterion_main!(benches);
