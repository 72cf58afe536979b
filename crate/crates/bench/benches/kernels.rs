//! Criterion benchmarks for the hot kernels: membership, partition indices,
//! block sums, profile construction, and norm evaluation.

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;
use std::hint::black_box;

use schreierlab_core::averages::{averages_along, block_sum};
use schreierlab_core::budget::Budget;
use schreierlab_core::gauge::desk_profile;
use schreierlab_core::ordinal::Ordinal;
use schreierlab_core::schreier::{is_member, s_index};
use schreierlab_core::sets::FiniteSet;
use schreierlab_core::spaces::{Caps, Space, Witness};
use schreierlab_core::vector::BlockVector;

fn bench_membership(c: &mut Criterion) {
    let two = Ordinal::nat(2);
    let sets: Vec<FiniteSet> = (0u32..256)
        .map(|mask| {
            let elems: Vec<u64> = (0..8)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| j as u64 + 1)
                .collect();
            FiniteSet::from_u64s(&elems).unwrap()
        })
        .collect();
    c.bench_function("membership_256_subsets_order2", |b| {
        b.iter(|| {
            let mut count = 0;
            for s in &sets {
                if is_member(black_box(s), &two) {
                    count += 1;
                }
            }
            black_box(count)
        })
    });
}

fn bench_partition_index(c: &mut Criterion) {
    let budget = Budget::default();
    let two = Ordinal::nat(2);
    let m = BigUint::from(3000u32);
    c.bench_function("partition_index_order2_anchor3000", |b| {
        b.iter(|| s_index(&two, black_box(&m), 1, &budget).unwrap())
    });
}

fn bench_block_sum(c: &mut Criterion) {
    let budget = Budget::default();
    let one = Ordinal::nat(1);
    let blocks = averages_along(&one, &BigUint::from(7u32), 5, &budget).unwrap();
    let f = FiniteSet::from_u64s(&[9, 17, 40, 80, 150]).unwrap();
    c.bench_function("block_sum_5_blocks", |b| {
        b.iter(|| block_sum(&one, black_box(&blocks), &f).unwrap())
    });
}

fn bench_profile_build(c: &mut Criterion) {
    let budget = Budget::default();
    let mut g = c.benchmark_group("gauge");
    g.sample_size(10);
    g.bench_function("desk_profile_build", |b| {
        b.iter(|| desk_profile(&budget).unwrap())
    });
    g.finish();
}

fn bench_norm_eval(c: &mut Criterion) {
    let budget = Budget::default();
    let aa = Space::section_four_aa(Ordinal::nat(1), 256, Caps::default()).unwrap();
    let e8 = aa.make_witness(&Witness::EBlock { n: 8 }).unwrap();
    let s3 = Space::section_three(desk_profile(&budget).unwrap(), Caps::default());
    let long_block = BlockVector::indicator_span(
        BigUint::from(500u32),
        (BigUint::from(500u32) << 500u32) - 1u32,
    )
    .unwrap();
    let mut g = c.benchmark_group("norm");
    g.sample_size(20);
    g.bench_function("window_indicator_norm_n8", |b| {
        b.iter(|| aa.norm(black_box(&e8)).unwrap())
    });
    g.bench_function("long_block_theta_component", |b| {
        b.iter(|| {
            s3.components(black_box(&long_block)).unwrap()[1]
                .value
                .to_f64()
        })
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_membership,
    bench_partition_index,
    bench_block_sum,
    bench_profile_build,
    bench_norm_eval
);
criterion_main!(benches);
