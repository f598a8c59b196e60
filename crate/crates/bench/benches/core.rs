use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use moncore::engine;
use moncore::newton;
use moncore::FieldSpec;
use moncore_bench::{three_powers, three_variable_shape, two_variable, weighted};

fn monomial_arithmetic(c: &mut Criterion) {
    let i = two_variable(FieldSpec::Rational);
    let j = moncore::MonomialIdeal::pure_powers(i.ring(), &[6, 9]);
    c.bench_function("power I^4", |b| b.iter(|| black_box(&i).power(4).unwrap()));
    let j3 = j.power(3).unwrap();
    let i2 = i.power(2).unwrap();
    c.bench_function("colon J^3 : I^2", |b| b.iter(|| black_box(&j3).colon(black_box(&i2)).unwrap()));
}

fn closures(c: &mut Criterion) {
    let j = three_powers();
    c.bench_function("closure (x^3, y^4, z^5)", |b| b.iter(|| newton::integral_closure(black_box(&j)).unwrap()));
    let i = newton::integral_closure(&j).unwrap();
    c.bench_function("adjoint of I^3", |b| b.iter(|| newton::adjoint(black_box(&i), 3).unwrap()));
}

fn cores(c: &mut Criterion) {
    let i = two_variable(FieldSpec::Prime(65537));
    let rd = engine::find_monomial_reduction(&i).unwrap().unwrap();
    c.bench_function("core colon, two variables", |b| b.iter(|| engine::core_colon(black_box(&i), &rd, None).unwrap()));
    c.bench_function("core mono trial, two variables", |b| b.iter(|| engine::core_mono_trial(black_box(&i), 0).unwrap()));
    let char2 = two_variable(FieldSpec::Prime(2));
    c.bench_function("core mono trial, char 2", |b| b.iter(|| engine::core_mono_trial(black_box(&char2), 0).unwrap()));

    let mut slow = c.benchmark_group("large");
    slow.sample_size(10);
    let shape = three_variable_shape(12, 3, 4, 6);
    let rd = engine::find_monomial_reduction(&shape).unwrap().unwrap();
    slow.bench_function("core colon, three variables n = 12", |b| {
        b.iter(|| engine::core_colon(black_box(&shape), &rd, None).unwrap())
    });
    let s = weighted(&[30, 35, 42], 210);
    let rd = engine::find_monomial_reduction(&s).unwrap().unwrap();
    slow.bench_function("core colon, weights (30, 35, 42)", |b| {
        b.iter(|| engine::core_colon(black_box(&s), &rd, None).unwrap())
    });
    slow.finish();
}

criterion_group!(benches, monomial_arithmetic, closures, cores);
criterion_main!(benches);
