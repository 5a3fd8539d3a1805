use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hkbound_core::certify::cover_range;
use hkbound_core::rational::{frac, int, parse};
use hkbound_core::search::{optimize_bound, Objective, SearchParams};
use hkbound_core::volume::{nu_exact, nu_float};

fn volume(c: &mut Criterion) {
    let s = parse("2.74118").unwrap();
    c.bench_function("nu_exact d=7", |b| b.iter(|| nu_exact(black_box(&s), 7)));
    c.bench_function("nu_exact d=30", |b| b.iter(|| nu_exact(black_box(&s), 30)));
    c.bench_function("nu_float d=7", |b| b.iter(|| nu_float(black_box(2.74118), 7)));
}

fn search(c: &mut Criterion) {
    let params = SearchParams::for_dim(7);
    let objective = Objective::HBound { dim: 7, e: int(7) };
    c.bench_function("optimize H_7", |b| b.iter(|| optimize_bound(&objective, &params).unwrap()));
    let target = frac(71, 67);
    let mut group = c.benchmark_group("cover");
    group.sample_size(10);
    group.bench_function("d=7 [13, 5340]", |b| {
        b.iter(|| cover_range(7, 1, 13, 5340, &target, &params).unwrap())
    });
    group.finish();
}

criterion_group!(benches, volume, search);
criterion_main!(benches);
