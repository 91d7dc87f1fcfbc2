use adiag_core::catalog::catalog;
use adiag_core::classify::minimizer_scan;
use adiag_core::expr::evaluate;
use adiag_core::harmonic::ad_direct;
use adiag_core::{character_table, explicit_irreps, Execution};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("serial", Execution::Serial), ("parallel", Execution::Parallel)];

fn bench_ad_direct(c: &mut Criterion) {
    let mut group = c.benchmark_group("ad_direct");
    for expr in ["S4", "D4 x S3", "sd(C3 x C3, C4, shift)"] {
        let g = evaluate(expr).unwrap();
        let irreps = explicit_irreps(&g, &character_table(&g).unwrap()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, expr), &exec, |b, &exec| {
                b.iter(|| ad_direct(&g, &irreps, exec))
            });
        }
    }
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("catalog_scan");
    group.sample_size(10);
    let groups = catalog(32, Execution::Serial);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 32), &exec, |b, &exec| {
            b.iter(|| minimizer_scan(&groups, 32, true, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_ad_direct, bench_scan);
criterion_main!(benches);
