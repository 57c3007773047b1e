use std::hint::black_box;

use asympolar::asymlimit::{direct_root, graded_root, predicted_limit_right, Side};
use asympolar::liebridge::{ad, ad_consistency, SlnElement};
use asympolar::numlin::{eig_general, svd};
use asympolar::random::{complex_matrix, rng, sl_element, sl_separated};
use asympolar_bench::fixture;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn factorizations(c: &mut Criterion) {
    let mut group = c.benchmark_group("numlin");
    for n in [4, 8, 16] {
        let a = complex_matrix(&mut rng(1), n, n);
        group.bench_with_input(BenchmarkId::new("svd", n), &a, |bch, a| bch.iter(|| svd(black_box(a)).unwrap()));
        group.bench_with_input(BenchmarkId::new("eig_general", n), &a, |bch, a| {
            bch.iter(|| eig_general(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn limits(c: &mut Criterion) {
    let mut group = c.benchmark_group("asymlimit");
    for n in [3, 6, 10] {
        let (spec, b, cc) = fixture(n, 7);
        group.bench_function(BenchmarkId::new("predicted_limit_right", n), |bch| {
            bch.iter(|| predicted_limit_right(black_box(&spec), black_box(&cc)).unwrap())
        });
        for m in [1u64 << 4, 1 << 16, 1 << 30] {
            group.bench_function(BenchmarkId::new(format!("graded_root/n{n}"), m), |bch| {
                bch.iter(|| graded_root(&spec, &b, &cc, black_box(m)).unwrap())
            });
        }
        group.bench_function(BenchmarkId::new("direct_root/m16", n), |bch| {
            bch.iter(|| direct_root(&spec, &b, &cc, black_box(16), Side::Right).unwrap())
        });
    }
    group.finish();
}

fn lie(c: &mut Criterion) {
    let mut group = c.benchmark_group("liebridge");
    for n in [2, 3, 4] {
        let mut r = rng(3);
        let g = SlnElement::new(sl_separated(&mut r, n, 1.5)).unwrap();
        let g1 = SlnElement::new(sl_element(&mut r, n)).unwrap();
        let g2 = SlnElement::new(sl_element(&mut r, n)).unwrap();
        group.bench_function(BenchmarkId::new("ad", n), |bch| bch.iter(|| ad(black_box(&g))));
        group.bench_function(BenchmarkId::new("ad_consistency", n), |bch| {
            bch.iter(|| ad_consistency(&g, &g1, &g2, black_box(1 << 16)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, factorizations, limits, lie);
criterion_main!(benches);
