use std::cmp::Ordering;

use num_traits::Zero;
use pricing_lab_core::generators::{gen_harmonic, gen_loggap, gen_table1, small_random_corpus};
use pricing_lab_core::model::{rat, ratio};
use pricing_lab_core::preannounced::{
    best_fixed_price, contour_leq, contour_price, feasible_set, quantity_at, solve_preannounced_bruteforce,
    solve_preannounced_dp, Contour,
};
use pricing_lab_core::response::best_response_linear;
use pricing_lab_core::{MarketInstance, Price, PriceSchedule, Rational};

fn c_of(inst: &MarketInstance) -> Rational {
    inst.storage().linear_rate().unwrap().clone()
}

#[test]
fn dp_matches_oracle_on_500_instances() {
    let mut failures = Vec::new();
    for (k, inst) in small_random_corpus(500).iter().enumerate() {
        let dp = solve_preannounced_dp(inst).unwrap();
        let (_, oracle) = solve_preannounced_bruteforce(inst).unwrap();
        if dp.revenue != oracle {
            failures.push((k, dp.revenue.clone(), oracle));
        }
        assert_eq!(best_response_linear(inst, &dp.schedule).unwrap().revenue, dp.revenue, "instance {k}");
    }
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn dp_schedule_induces_no_storage() {
    for (k, inst) in small_random_corpus(500).iter().enumerate() {
        let dp = solve_preannounced_dp(inst).unwrap();
        assert_eq!(best_response_linear(inst, &dp.schedule).unwrap().total_storage, 0, "instance {k}");
    }
}

#[test]
fn dp_prices_are_contour_prices() {
    for (k, inst) in small_random_corpus(500).iter().enumerate() {
        let c = c_of(inst);
        let dp = solve_preannounced_dp(inst).unwrap();
        for t in 1..=inst.periods() {
            let Price::Finite(p) = dp.schedule.at(t) else { continue };
            let found = (1..=t).any(|s| {
                inst.ranked_row(s).values.iter().any(|v| v + &c * Rational::from_integer((t - s).into()) == *p)
            });
            assert!(found, "instance {k}: price {p} at period {t} is not a contour price");
        }
    }
}

#[test]
fn selling_prices_never_exceed_carried_prices() {
    for (k, inst) in small_random_corpus(500).iter().enumerate() {
        let c = c_of(inst);
        let dp = solve_preannounced_dp(inst).unwrap();
        let outcome = best_response_linear(inst, &dp.schedule).unwrap();
        for t in 1..=inst.periods() {
            let sold: u32 = outcome.plans.iter().map(|p| p.purchases[t - 1]).sum();
            let Price::Finite(pt) = dp.schedule.at(t) else {
                assert_eq!(sold, 0);
                continue;
            };
            if sold == 0 {
                continue;
            }
            for s in 1..t {
                if let Price::Finite(ps) = dp.schedule.at(s) {
                    assert!(*pt <= ps + &c * Rational::from_integer((t - s).into()), "instance {k}, periods {s} -> {t}");
                }
            }
        }
    }
}

#[test]
fn selected_contour_keys_never_rise() {
    for (k, inst) in small_random_corpus(500).iter().enumerate() {
        let c = c_of(inst);
        let dp = solve_preannounced_dp(inst).unwrap();
        let keys: Vec<Rational> = dp.path.iter().filter(|g| !g.is_dummy).map(|g| g.key(&c).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[1] <= w[0]), "instance {k}: {keys:?}");
    }
}

#[test]
fn revenue_to_go_is_monotone_in_the_incumbent_key() {
    for (k, inst) in small_random_corpus(200).iter().enumerate() {
        let c = c_of(inst);
        let dp = solve_preannounced_dp(inst).unwrap();
        let t_end = inst.periods() + 1;
        for g in dp.tables.incumbent_contours(inst.periods()) {
            assert_eq!(dp.tables.revenue_to_go(t_end, g), Some(Rational::zero()));
        }
        for t in 1..=inst.periods() {
            let mut rows: Vec<(Option<Rational>, Rational)> = dp
                .tables
                .incumbent_contours(t)
                .iter()
                .map(|g| (g.key(&c), dp.tables.revenue_to_go(t, g).unwrap()))
                .collect();
            rows.sort_by(|a, b| match (&a.0, &b.0) {
                (None, None) => Ordering::Equal,
                (None, _) => Ordering::Greater,
                (_, None) => Ordering::Less,
                (Some(x), Some(y)) => x.cmp(y),
            });
            assert!(rows.windows(2).all(|w| w[0].1 <= w[1].1), "instance {k}, period {t}");
        }
    }
}

#[test]
fn fixed_price_is_dominated() {
    for (k, inst) in small_random_corpus(500).iter().enumerate() {
        let (p, fixed) = best_fixed_price(inst).unwrap();
        let dp = solve_preannounced_dp(inst).unwrap();
        assert!(fixed <= dp.revenue, "instance {k}");
        if !fixed.is_zero() {
            let schedule = PriceSchedule::from_finite(vec![p; inst.periods()]);
            assert_eq!(best_response_linear(inst, &schedule).unwrap().revenue, fixed, "instance {k}");
        }
    }
}

#[test]
fn paper_families() {
    let sol = solve_preannounced_dp(&gen_table1()).unwrap();
    assert_eq!(sol.schedule.to_string(), "(17, 15)");
    assert_eq!(sol.revenue, rat(32));
    for n in 1..=6u32 {
        let sol = solve_preannounced_dp(&gen_loggap(n).unwrap()).unwrap();
        assert_eq!(sol.revenue, rat((1 << n) - 1), "n = {n}");
    }
    let sol = solve_preannounced_dp(&gen_harmonic(4, &ratio(1, 8)).unwrap()).unwrap();
    assert_eq!(sol.revenue, ratio(9, 8));
    for n in [4, 8, 16] {
        assert_eq!(solve_preannounced_dp(&gen_harmonic(n, &rat(0)).unwrap()).unwrap().revenue, rat(1));
    }
}

#[test]
fn contour_examples() {
    let inst = gen_table1();
    let c = rat(1);
    let g = |v: i64, s: usize, j: usize| Contour::new(rat(v), s, j);
    assert_eq!(contour_price(&g(17, 1, 1), 2, &c).unwrap(), Price::Finite(rat(18)));
    assert!(contour_leq(&g(10, 1, 2), &g(15, 2, 1), &c));
    assert!(contour_leq(&g(15, 2, 1), &g(17, 1, 1), &c));
    assert_eq!(feasible_set(&inst, 2, &g(10, 1, 2)).unwrap().len(), 2);
    assert_eq!(quantity_at(&inst, &g(10, 1, 2), 2), 1);
}
