use std::hint::black_box;

use ccc_core::fixtures;
use ccc_core::{
    abc_factorization, decide_left_functorial, smith_normal_form, smooth_refine, unit_chi, Fan, FanMorphism,
    IntMatrix, LatticeMap, StackyFan,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn lattice(c: &mut Criterion) {
    let a = IntMatrix::from_i64_rows(
        &[&[12, -7, 30, 4], &[6, 22, -9, 15], &[-18, 3, 44, 8], &[9, 10, 11, -27]],
        4,
    );
    c.bench_function("smith_normal_form 4x4", |b| b.iter(|| smith_normal_form(black_box(&a))));
}

fn fans(c: &mut Criterion) {
    let cone = Fan::from_i64(2, &[&[&[1, 0], &[2, 7]]]).unwrap();
    c.bench_function("smooth_refine index-7 cone", |b| b.iter(|| smooth_refine(black_box(&cone)).unwrap()));

    let p1 = fixtures::p1();
    let proj = FanMorphism::new(
        LatticeMap::new(IntMatrix::from_i64_rows(&[&[1, 0]], 2)),
        fixtures::p1xp1(),
        p1.clone(),
    )
    .unwrap();
    c.bench_function("is_proper p1xp1 -> p1", |b| b.iter(|| proj.is_proper().unwrap()));
    c.bench_function("abc_factorization p1xp1 -> p1", |b| b.iter(|| abc_factorization(black_box(&proj)).unwrap()));

    let phi = fixtures::a2_mod_z2_morphism();
    c.bench_function("decide_left_functorial quotient", |b| b.iter(|| decide_left_functorial(black_box(&phi)).unwrap()));
}

fn euler(c: &mut Criterion) {
    let p1 = StackyFan::plain(fixtures::p1());
    let p1xp1 = StackyFan::plain(fixtures::p1xp1());
    c.bench_function("unit_chi p1", |b| b.iter(|| unit_chi(black_box(&p1)).unwrap()));
    c.bench_function("unit_chi p1xp1", |b| b.iter(|| unit_chi(black_box(&p1xp1)).unwrap()));
}

criterion_group!(benches, lattice, fans, euler);
criterion_main!(benches);
