use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{demand_size, MarketInstance, Price, PriceSchedule, Rational};
use crate::response::{best_response, best_response_linear};

pub const ORACLE_MAX_PERIODS: usize = 5;
pub const ORACLE_MAX_DEMAND: usize = 12;
const GRID_MAX_SCHEDULES: u128 = 2_000_000;

/// Exhaustive search over schedules whose prices are past-anchored contour
/// prices `v_{j,s} + (t - s) c`, `s <= t`, or skip.
///
/// Revenue is accumulated period by period from the running effective price,
/// and the winner is re-checked against the linear best response.
pub fn solve_preannounced_bruteforce(inst: &MarketInstance) -> Result<(PriceSchedule, Rational)> {
    let c = inst.storage().linear_rate().ok_or(Error::ConcaveNotSupported)?.clone();
    let periods = inst.periods();
    let d = demand_size(inst);
    if periods > ORACLE_MAX_PERIODS || d > ORACLE_MAX_DEMAND {
        return Err(Error::InstanceTooLarge(format!(
            "oracle needs T <= {ORACLE_MAX_PERIODS} and D <= {ORACLE_MAX_DEMAND}, got T = {periods}, D = {d}"
        )));
    }
    let candidates: Vec<Vec<Price>> = (1..=periods)
        .map(|t| {
            let mut set = BTreeSet::new();
            for s in 1..=t {
                let shift = &c * Rational::from_integer((t - s).into());
                for v in inst.ranked_row(s).values.iter().filter(|v| !v.is_zero()) {
                    set.insert(v + &shift);
                }
            }
            std::iter::once(Price::Skip).chain(set.into_iter().rev().map(Price::Finite)).collect()
        })
        .collect();

    let mut search = Search { inst, c: &c, candidates: &candidates, chosen: Vec::new(), best: None };
    search.run(1, None, Rational::zero());
    let (schedule, revenue) = search.best.expect("the all-skip schedule is always evaluated");
    assert_eq!(best_response_linear(inst, &schedule)?.revenue, revenue, "oracle accounting disagrees");
    Ok((schedule, revenue))
}

struct Search<'a> {
    inst: &'a MarketInstance,
    c: &'a Rational,
    candidates: &'a [Vec<Price>],
    chosen: Vec<Price>,
    best: Option<(PriceSchedule, Rational)>,
}

impl Search<'_> {
    /// `carry`: effective price entering period `t` from earlier purchases and
    /// the price actually paid at its source.
    fn run(&mut self, t: usize, carry: Option<(Rational, Rational)>, revenue: Rational) {
        if t > self.inst.periods() {
            if self.best.as_ref().is_none_or(|(_, r)| revenue > *r) {
                self.best = Some((PriceSchedule::new(self.chosen.clone()), revenue));
            }
            return;
        }
        let carried = carry.map(|(e, paid)| (e + self.c, paid));
        for price in &self.candidates[t - 1] {
            let here = match (price, &carried) {
                (Price::Finite(p), Some((e, _))) if e < p => carried.clone(),
                (Price::Finite(p), _) => Some((p.clone(), p.clone())),
                (Price::Skip, _) => carried.clone(),
            };
            let mut gained = revenue.clone();
            if let Some((e, paid)) = &here {
                let sold = self.inst.ranked_row(t).values.iter().take_while(|v| *v >= e && !v.is_zero()).count();
                gained += paid * Rational::from_integer(sold.into());
            }
            self.chosen.push(price.clone());
            self.run(t + 1, here, gained);
            self.chosen.pop();
        }
    }
}

/// Result of evaluating every schedule of a price grid.
#[derive(Clone, Debug)]
pub struct GridEnumeration {
    pub best_revenue: Rational,
    /// Every revenue-maximizing schedule with the total storage it induces.
    pub maximizers: Vec<(PriceSchedule, u64)>,
    pub evaluated: usize,
}

/// Evaluates every schedule in the product of the per-period grids with the
/// best-response engine matching the storage model.
pub fn enumerate_grid(inst: &MarketInstance, grid: &[Vec<Price>]) -> Result<GridEnumeration> {
    if grid.len() != inst.periods() {
        return Err(Error::DimensionMismatch(format!(
            "grid has {} periods, instance has {}",
            grid.len(),
            inst.periods()
        )));
    }
    let total: u128 = grid.iter().map(|g| g.len() as u128).product();
    if total > GRID_MAX_SCHEDULES {
        return Err(Error::InstanceTooLarge(format!("{total} schedules exceed the limit of {GRID_MAX_SCHEDULES}")));
    }
    let mut out = GridEnumeration { best_revenue: Rational::zero(), maximizers: Vec::new(), evaluated: 0 };
    let mut index = vec![0usize; grid.len()];
    loop {
        let schedule = PriceSchedule::new(index.iter().zip(grid).map(|(&i, g)| g[i].clone()).collect());
        let outcome = best_response(inst, &schedule)?;
        out.evaluated += 1;
        if outcome.revenue > out.best_revenue || out.maximizers.is_empty() {
            if outcome.revenue > out.best_revenue {
                out.maximizers.clear();
            }
            out.best_revenue = outcome.revenue.clone();
            out.maximizers.push((schedule, outcome.total_storage));
        } else if outcome.revenue == out.best_revenue {
            out.maximizers.push((schedule, outcome.total_storage));
        }
        // odometer
        let mut k = grid.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < grid[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
}

/// Candidate prices for grid enumeration under any storage model: skip and
/// `v_{j,s}` plus the cost of carrying one unit from `s` to `t`, where each
/// period of carrying may be charged any marginal cost the table produces.
pub fn concave_candidate_grid(inst: &MarketInstance) -> Vec<Vec<Price>> {
    let marginals = inst.storage().distinct_marginals();
    // carry[k]: every sum of k marginals
    let mut carry: Vec<BTreeSet<Rational>> = vec![BTreeSet::from([Rational::zero()])];
    for k in 1..inst.periods() {
        let next = carry[k - 1].iter().flat_map(|s| marginals.iter().map(move |m| s + m)).collect();
        carry.push(next);
    }
    (1..=inst.periods())
        .map(|t| {
            let mut set = BTreeSet::new();
            for s in 1..=t {
                for v in inst.ranked_row(s).values.iter().filter(|v| !v.is_zero()) {
                    for extra in &carry[t - s] {
                        set.insert(v + extra);
                    }
                }
            }
            std::iter::once(Price::Skip).chain(set.into_iter().rev().map(Price::Finite)).collect()
        })
        .collect()
}
