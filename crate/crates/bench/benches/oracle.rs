use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sev_bench::oracle_fixtures;
use sev_core::oracle::h0_oracle;
use sev_core::{OracleConfig, PrimeField};

fn rank_oracle(c: &mut Criterion) {
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("h0_oracle");
    group.sample_size(10);
    for (name, sys) in oracle_fixtures() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &sys, |b, sys| {
            b.iter(|| h0_oracle(sys, &cfg, &[]).unwrap())
        });
    }
    group.finish();
}

fn field_rank(c: &mut Criterion) {
    let f = PrimeField::new(PrimeField::DEFAULT_PRIME).unwrap();
    let n = 120;
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ((i * 31 + j * 17 + i * j) % 1009) as u64)
                .collect()
        })
        .collect();
    c.bench_function("rank_120x120", |b| b.iter(|| f.rank(rows.clone())));
}

criterion_group!(benches, rank_oracle, field_rank);
criterion_main!(benches);
