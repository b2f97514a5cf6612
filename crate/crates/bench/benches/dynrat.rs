use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dynrat::arith::factor;
use dynrat::census::{count_heights, Variant};
use dynrat::dynamics::{find_periodic_with, SearchConfig, SearchStrategy};
use dynrat::iterates::cleared_iterate;
use dynrat::newton::irreducibility_oracle;
use dynrat::{BigInt, BigRat};

fn rat(s: &str) -> BigRat {
    s.parse().unwrap()
}

fn bench_factor(c: &mut Criterion) {
    // Product of two 31-bit primes: exercises rho rather than trial division.
    let semiprime = BigInt::from(2_147_483_647u64) * BigInt::from(2_147_483_629u64);
    c.bench_function("factor/semiprime_62bit", |b| b.iter(|| factor(black_box(&semiprime))));
}

fn bench_iterates(c: &mut Criterion) {
    let (c1, c2) = (BigInt::from(-29), BigInt::from(16));
    c.bench_function("cleared_iterate/d2_n8", |b| {
        b.iter(|| cleared_iterate(2, black_box(&c1), black_box(&c2), 8).unwrap())
    });
    let h = cleared_iterate(2, &BigInt::from(3), &BigInt::from(1), 3).unwrap().to_full_degree();
    c.bench_function("irreducibility_oracle/x2_plus_3_n3", |b| {
        b.iter(|| irreducibility_oracle(black_box(&h)).unwrap())
    });
}

fn bench_periodic(c: &mut Criterion) {
    let cycle3 = rat("-29/16");
    for (name, strategy) in [("window", SearchStrategy::Window), ("divisors", SearchStrategy::Divisors)] {
        let cfg = SearchConfig::with_strategy(strategy);
        c.bench_function(&format!("find_periodic/{name}/-29_16_n3"), |b| {
            b.iter(|| find_periodic_with(2, black_box(&cycle3), 3, &cfg).unwrap())
        });
    }
}

fn bench_census(c: &mut Criterion) {
    c.bench_function("count_heights/d2_N1e5", |b| {
        b.iter(|| count_heights(black_box(100_000), 2, Variant::Reduced).unwrap())
    });
}

criterion_group!(benches, bench_factor, bench_iterates, bench_periodic, bench_census);
criterion_main!(benches);
