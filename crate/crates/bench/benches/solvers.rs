use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pricing_lab_bench::random_instance;
use pricing_lab_core::contingent::{build_price_grid, certify_spne, solve_spne_single_buyer, CertifyOptions, StrategyProfile};
use pricing_lab_core::generators::{gen_harmonic, gen_loggap};
use pricing_lab_core::model::rat;
use pricing_lab_core::preannounced::{solve_preannounced_bruteforce, solve_preannounced_dp};
use pricing_lab_core::response::{best_response_concave, best_response_linear};

fn dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("preannounced_dp");
    group.sample_size(10);
    for (periods, buyers) in [(25, 25), (50, 25), (50, 50), (100, 25)] {
        let inst = random_instance(periods, buyers, 1);
        group.bench_with_input(BenchmarkId::from_parameter(format!("T{periods}xN{buyers}")), &inst, |b, inst| {
            b.iter(|| solve_preannounced_dp(black_box(inst)).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let inst = random_instance(4, 3, 2);
    c.bench_function("bruteforce_T4xN3", |b| b.iter(|| solve_preannounced_bruteforce(black_box(&inst)).unwrap()));
}

fn responses(c: &mut Criterion) {
    let inst = random_instance(50, 50, 3);
    let schedule = solve_preannounced_dp(&inst).unwrap().schedule;
    c.bench_function("best_response_linear_T50xN50", |b| {
        b.iter(|| best_response_linear(black_box(&inst), black_box(&schedule)).unwrap())
    });
    c.bench_function("best_response_concave_T50xN50", |b| {
        b.iter(|| best_response_concave(black_box(&inst), black_box(&schedule)).unwrap())
    });
}

fn contingent(c: &mut Criterion) {
    let mut group = c.benchmark_group("contingent");
    group.sample_size(10);
    let inst = gen_harmonic(8, &rat(0)).unwrap();
    let grid = build_price_grid(&inst, Some(&pricing_lab_core::model::ratio(1, 64))).unwrap();
    group.bench_function("spne_harmonic_8", |b| b.iter(|| solve_spne_single_buyer(black_box(&inst), &grid).unwrap()));
    let inst = gen_loggap(3).unwrap();
    let profile = StrategyProfile::builtin("pacman", &inst).unwrap();
    let grid = build_price_grid(&inst, None).unwrap();
    group.bench_function("certify_loggap_3", |b| {
        b.iter(|| certify_spne(black_box(&inst), &profile, &grid, CertifyOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, dp, oracle, responses, contingent);
criterion_main!(benches);
