use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use sqav_core::catalog::catalog_lookup;
use sqav_core::generator::squarefree_ternary;
use sqav_core::pseudosquare::{morphism_match, MatchBudget};
use sqav_core::repetition::{is_en_free, Exponent, FreenessSpec};
use sqav_core::search::{longest_word, SearchConstraint};
use sqav_core::word::{distinct_squares, Word};

fn catalog_image(name: &str, letters: usize) -> Word {
    let h = &catalog_lookup(name).unwrap().morphism;
    let u = squarefree_ternary(letters).next().unwrap();
    h.apply(&u).unwrap()
}

fn bench_square_scan(c: &mut Criterion) {
    let img = catalog_image("h_3_13", 6);
    c.bench_function("distinct_squares/1296", |b| {
        b.iter(|| distinct_squares(black_box(&img)))
    });
}

fn bench_freeness(c: &mut Criterion) {
    let img = catalog_image("m_246", 4);
    let spec = FreenessSpec::strict(Exponent::new(11, 6), 4);
    c.bench_function("is_en_free/984", |b| {
        b.iter(|| is_en_free(black_box(&img), black_box(&spec)))
    });
}

fn bench_longest(c: &mut Criterion) {
    c.bench_function("longest_word/2x2", |b| {
        b.iter(|| {
            longest_word(
                black_box(&SearchConstraint::squares_antisquares(2, 2)),
                2,
                40,
            )
        })
    });
}

fn bench_match(c: &mut Criterion) {
    let h = &catalog_lookup("h_5_5").unwrap().morphism;
    let x: Word = "0120".parse().unwrap();
    let y = h.apply(&x).unwrap();
    let budget = MatchBudget::nonerasing();
    c.bench_function("morphism_match/144", |b| {
        b.iter_batched(
            || (x.clone(), y.clone()),
            |(x, y)| morphism_match(&x, &y, black_box(&budget)),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    kernels,
    bench_square_scan,
    bench_freeness,
    bench_longest,
    bench_match
);
criterion_main!(kernels);
