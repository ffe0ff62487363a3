//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use pricing_lab_cli::sweep::{ratio_sweep, Family, SweepOptions};
use pricing_lab_core::contingent::{
    build_price_grid, certify_spne, discrimination_upper_bound, simulate_profile, solve_spne_single_buyer, CertifyOptions,
    StrategyProfile,
};
use pricing_lab_core::generators::{gen_concave_cx, gen_harmonic, gen_loggap, gen_random, small_random_corpus, RandomKind, RandomSpec};
use pricing_lab_core::model::{rat, ratio};
use pricing_lab_core::preannounced::{concave_candidate_grid, enumerate_grid, solve_preannounced_bruteforce, solve_preannounced_dp};
use pricing_lab_core::response::{best_response_concave, best_response_linear};
use pricing_lab_core::{demand_size, harmonic, MarketInstance, Price, PriceSchedule, Rational};
use serde_json::Value;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn bin(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pricing-lab")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: bad JSON: {e}"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pricing-lab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let inst_path = scratch("table1.json");
    let sched_path = scratch("schedule.json");
    let inst = inst_path.to_str().unwrap();
    let sched = sched_path.to_str().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_pricing-lab"))
        .args(["generate", "table1", "--out", inst])
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), "generate table1 failed")?;
    let pre = bin(&["solve", "pre", "--instance", inst])?;
    ensure(pre == serde_json::json!({"prices": ["17", "15"], "revenue": "32"}), format!("solve pre gave {pre}"))?;
    std::fs::write(&sched_path, pre.to_string()).map_err(|e| e.to_string())?;
    let resp = bin(&["respond", "--instance", inst, "--schedule", sched])?;
    ensure(resp["total_storage"] == 0 && resp["consumer_surplus"] == "0", format!("respond gave {resp}"))?;
    let cert = bin(&["certify", "--instance", inst, "--profile", "builtin:table1-threat"])?;
    ensure(cert["certified"] == true, format!("threat profile not certified: {cert}"))?;
    ensure(cert["on_path_revenue"] == "34" && cert["consumer_surplus"] == "11", format!("certify gave {cert}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("schedule (17, 15) revenue 32, storage 0, surplus 0; threat certified, revenue 34, surplus 11 ({:.0?})", start.elapsed()))
}

fn criterion_2(corpus: &[MarketInstance]) -> Check {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (k, inst) in corpus.iter().enumerate() {
        let dp = solve_preannounced_dp(inst).map_err(|e| e.to_string())?.revenue;
        let (_, oracle) = solve_preannounced_bruteforce(inst).map_err(|e| e.to_string())?;
        if dp != oracle {
            failures.push(format!("#{k}: dp {dp} vs oracle {oracle}"));
        }
    }
    ensure(failures.is_empty(), format!("{} mismatches: {:?}", failures.len(), failures))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{} instances, 0 mismatches ({:.1?})", corpus.len(), start.elapsed()))
}

fn criterion_3(corpus: &[MarketInstance]) -> Check {
    let mut failures = Vec::new();
    for (k, inst) in corpus.iter().enumerate() {
        let dp = solve_preannounced_dp(inst).map_err(|e| e.to_string())?;
        let storage = best_response_linear(inst, &dp.schedule).map_err(|e| e.to_string())?.total_storage;
        if storage != 0 {
            failures.push(k);
        }
    }
    ensure(failures.is_empty(), format!("storage under DP schedule for instances {failures:?}"))?;
    Ok(format!("{} instances, total_storage 0 everywhere", corpus.len()))
}

fn criterion_4() -> Check {
    let mut notes = Vec::new();
    for n in [4usize, 8, 16] {
        let start = Instant::now();
        let inst = gen_harmonic(n, &rat(0)).map_err(|e| e.to_string())?;
        let pa = solve_preannounced_dp(&inst).map_err(|e| e.to_string())?.revenue;
        ensure(pa == rat(1), format!("N={n}: preannounced revenue {pa}"))?;
        let nr = Rational::from_integer(n.into());
        let delta = (&nr * &nr).recip();
        let grid = build_price_grid(&inst, Some(&delta)).map_err(|e| e.to_string())?;
        let cp = solve_spne_single_buyer(&inst, &grid).map_err(|e| e.to_string())?.revenue;
        let floor = harmonic(n) - nr.recip();
        ensure(cp >= floor, format!("N={n}: contingent revenue {cp} < {floor}"))?;
        let ratio = &cp / &pa;
        if n == 8 {
            ensure(ratio > rat(2), format!("N=8: ratio {ratio} <= 2"))?;
        }
        within(start.elapsed(), Duration::from_secs(30)).map_err(|e| format!("N={n}: {e}"))?;
        notes.push(format!("N={n}: PA 1, CP {cp} >= H_N - 1/N"));
    }
    Ok(notes.join("; "))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let params: Vec<u32> = (2..=6).collect();
    let rows = ratio_sweep(Family::LogGap, &params, &SweepOptions::default()).map_err(|e| e.to_string())?;
    for r in &rows {
        let n = r.param as i64;
        ensure(r.pa == rat((1 << n) - 1), format!("n={n}: PA {}", r.pa))?;
        let expected = n * (1 << (n - 1)) - (n - 1);
        ensure(r.cp == rat(expected), format!("n={n}: simulated {} != {expected}", r.cp))?;
    }
    let ratios: Vec<Rational> = rows.iter().map(|r| r.ratio.clone().unwrap()).collect();
    ensure(ratios.windows(2).all(|w| w[0] <= w[1]), "ratio column decreases")?;
    ensure(ratios[0] == rat(1), format!("n=2 ratio {}", ratios[0]))?;
    ensure(ratios[4] >= ratio(158, 100), format!("n=6 ratio {}", ratios[4]))?;
    for n in 2..=3 {
        let inst = gen_loggap(n).map_err(|e| e.to_string())?;
        let profile = StrategyProfile::builtin("pacman", &inst).map_err(|e| e.to_string())?;
        let grid = build_price_grid(&inst, None).map_err(|e| e.to_string())?;
        let r = certify_spne(&inst, &profile, &grid, CertifyOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.certified, format!("n={n}: pacman not certified: {:?} {:?}", r.worst_retailer, r.worst_buyer))?;
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    let shown: Vec<String> = ratios.iter().map(ToString::to_string).collect();
    Ok(format!("PA 2^n-1, CP n*2^(n-1)-(n-1), ratios [{}], certified n<=3 ({:.1?})", shown.join(", "), start.elapsed()))
}

fn criterion_6(corpus: &[MarketInstance]) -> Check {
    let mut checked = 0;
    let mut revenues = 0;
    let mut all: Vec<MarketInstance> = corpus.to_vec();
    for n in 2..=6 {
        all.push(gen_loggap(n).map_err(|e| e.to_string())?);
    }
    for (k, inst) in all.iter().enumerate() {
        let b = discrimination_upper_bound(inst).map_err(|e| e.to_string())?;
        ensure(b.sum_values <= b.bound, format!("#{k}: sum {} > bound {}", b.sum_values, b.bound))?;
        checked += 1;
        let mut contingent = Vec::new();
        if inst.is_single_buyer() {
            let grid = build_price_grid(inst, None).map_err(|e| e.to_string())?;
            contingent.push(solve_spne_single_buyer(inst, &grid).map_err(|e| e.to_string())?.revenue);
        } else {
            let profile = StrategyProfile::builtin("pacman", inst).map_err(|e| e.to_string())?;
            contingent.push(simulate_profile(inst, &profile).map_err(|e| e.to_string())?.revenue);
        }
        contingent.push(solve_preannounced_dp(inst).map_err(|e| e.to_string())?.revenue);
        for r in contingent {
            ensure(r <= b.bound, format!("#{k}: revenue {r} > bound {}", b.bound))?;
            revenues += 1;
        }
    }
    Ok(format!("{checked} instances, {revenues} revenues within H_l * PiF"))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let inst = gen_concave_cx(5, 5, &ratio(1, 16)).map_err(|e| e.to_string())?;
    let e = enumerate_grid(&inst, &concave_candidate_grid(&inst)).map_err(|e| e.to_string())?;
    ensure(e.maximizers.iter().all(|(_, s)| *s > 0), "a revenue-maximizing schedule stores nothing")?;
    let witness = PriceSchedule::new(vec![Price::Finite(rat(1)), Price::Skip, Price::Finite(rat(4))]);
    let r = best_response_concave(&inst, &witness).map_err(|e| e.to_string())?.revenue;
    ensure(r == rat(27), format!("(1, skip, 4) earns {r}"))?;
    let first = format!("counterexample: {} schedules, best {}, all {} maximizers store", e.evaluated, e.best_revenue, e.maximizers.len());

    let mut count = 0;
    for seed in 0..100u64 {
        let periods = 1 + (seed % 3) as usize;
        let units = 1 + ((seed / 3) % 3) as usize;
        let spec = RandomSpec::new(1000 + seed, periods, units, 8, vec![rat(0), ratio(1, 2), rat(1), rat(2), rat(3)])
            .with_kind(RandomKind::SingleConcave);
        let inst = gen_random(&spec).map_err(|e| e.to_string())?;
        let e = enumerate_grid(&inst, &concave_candidate_grid(&inst)).map_err(|e| e.to_string())?;
        ensure(e.maximizers.iter().any(|(_, s)| *s == 0), format!("seed {}: every maximizer stores", 1000 + seed))?;
        count += 1;
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{first}; {count} single-buyer instances have a storage-free optimum ({:.1?})", start.elapsed()))
}

fn dp_time(periods: usize, buyers: usize, seed: u64) -> (Duration, usize) {
    let spec = RandomSpec::new(seed, periods, buyers, 100, vec![rat(0), rat(1), rat(2)]);
    let inst = gen_random(&spec).unwrap();
    // best of three runs
    let best = (0..3)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(solve_preannounced_dp(&inst).unwrap());
            start.elapsed()
        })
        .min()
        .unwrap();
    (best, demand_size(&inst))
}

fn criterion_8() -> Check {
    let (base, d) = dp_time(50, 50, 8);
    within(base, Duration::from_secs(10)).map_err(|e| format!("T=50, N=50: {e}"))?;
    let (t_small, _) = dp_time(50, 40, 9);
    let (t_large, _) = dp_time(100, 20, 9);
    let t_scale = t_large.as_secs_f64() / t_small.as_secs_f64();
    ensure(t_scale <= 3.0, format!("doubling T at fixed D scaled time by {t_scale:.2}"))?;
    let (d_small, _) = dp_time(50, 20, 10);
    let (d_large, _) = dp_time(50, 40, 10);
    let d_scale = d_large.as_secs_f64() / d_small.as_secs_f64();
    ensure(d_scale <= 5.0, format!("doubling D at fixed T scaled time by {d_scale:.2}"))?;
    Ok(format!("T=50 N=50 (D={d}) in {base:.2?}; 2xT: {t_scale:.2}x; 2xD: {d_scale:.2}x"))
}

fn main() {
    let corpus = small_random_corpus(500);
    let criteria: Vec<Criterion> = vec![
        ("1 worked example", Box::new(criterion_1)),
        ("2 oracle equivalence", Box::new(|| criterion_2(&corpus))),
        ("3 no-storage invariant", Box::new(|| criterion_3(&corpus))),
        ("4 harmonic gap", Box::new(criterion_4)),
        ("5 log-gap family", Box::new(criterion_5)),
        ("6 upper bound", Box::new(|| criterion_6(&corpus))),
        ("7 concave storage", Box::new(criterion_7)),
        ("8 performance", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
