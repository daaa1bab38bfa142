use criterion::{criterion_group, criterion_main, Criterion};
use sev_core::effect_varieties::{classify_alpha_sev, EffectVariety};
use sev_core::search::{scan_hypersurfaces, scan_product_divisors, scan_rnc};
use sev_core::LinearSystem;

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("hypersurfaces_6_3_7", |b| {
        b.iter(|| scan_hypersurfaces(6, 3, 7).unwrap())
    });
    group.bench_function("rnc_7_7", |b| b.iter(|| scan_rnc(7, 7).unwrap()));
    group.bench_function("products_t2", |b| {
        b.iter(|| scan_product_divisors(2, 6, 4, 9).unwrap())
    });
    group.bench_function("products_t3", |b| {
        b.iter(|| scan_product_divisors(3, 5, 3, 7).unwrap())
    });
    group.finish();
}

fn classify(c: &mut Criterion) {
    let sys: LinearSystem = "P3:d=9:6,4x8".parse().unwrap();
    let y = EffectVariety::through_all(&sys, vec![2]);
    c.bench_function("classify_quadric", |b| {
        b.iter(|| classify_alpha_sev(&sys, &y).unwrap())
    });
}

criterion_group!(benches, scans, classify);
criterion_main!(benches);
