use num_traits::Zero;

use super::{ConsumerPlan, MarketOutcome, TieBreak};
use crate::error::{Error, Result};
use crate::model::{MarketInstance, Price, PriceSchedule, Rational};

/// Largest inventory the per-buyer program will track.
const MAX_INVENTORY: u32 = 10_000;

/// Lexicographic objective: utility, then consumption (sign set by the tie
/// rule), then least storage, then latest purchases.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Score {
    utility: Rational,
    consumption: i64,
    neg_storage: i64,
    lateness: i64,
}

impl Score {
    fn zero() -> Self {
        Self { utility: Rational::zero(), consumption: 0, neg_storage: 0, lateness: 0 }
    }

    fn plus(&self, other: &Score) -> Score {
        Score {
            utility: &self.utility + &other.utility,
            consumption: self.consumption + other.consumption,
            neg_storage: self.neg_storage + other.neg_storage,
            lateness: self.lateness + other.lateness,
        }
    }
}

pub fn best_response_concave(inst: &MarketInstance, schedule: &PriceSchedule) -> Result<MarketOutcome> {
    best_response_concave_with(inst, schedule, TieBreak::Buy)
}

/// Exact best response for any storage table, by dynamic programming over
/// `(period, inventory)` for each buyer separately. Each buyer pays the
/// storage cost of her own inventory. Inventory never exceeds the buyer's
/// remaining future demand.
pub fn best_response_concave_with(inst: &MarketInstance, schedule: &PriceSchedule, tie: TieBreak) -> Result<MarketOutcome> {
    schedule.check_len(inst.periods())?;
    let plans = (0..inst.buyers()).map(|b| buyer_plan(inst, schedule, b, tie)).collect::<Result<Vec<_>>>()?;
    MarketOutcome::evaluate(inst, schedule, plans)
}

fn buyer_plan(inst: &MarketInstance, schedule: &PriceSchedule, buyer: usize, tie: TieBreak) -> Result<ConsumerPlan> {
    let periods = inst.periods();
    // bound[t]: inventory allowed at the end of period t (t = 0..=T)
    let bound: Vec<u32> = (0..=periods).map(|t| inst.demand_after(buyer, t)).collect();
    if bound[0] > MAX_INVENTORY {
        return Err(Error::InventoryBoundExceeded(format!(
            "buyer {buyer} demands {} units, limit {MAX_INVENTORY}",
            bound[0]
        )));
    }
    let consume_sign = match tie {
        TieBreak::Buy => 1,
        TieBreak::Abstain => -1,
    };

    // value[t][s]: best score from period t + 1 on, entering with s units
    let mut value: Vec<Vec<Score>> = vec![Vec::new(); periods + 1];
    value[periods] = vec![Score::zero()];
    // choice[t][s] = (purchase, consumption) at period t + 1
    let mut choice: Vec<Vec<(u32, u32)>> = vec![Vec::new(); periods];
    for t in (1..=periods).rev() {
        let units = inst.units(buyer, t);
        let mut gains = vec![Rational::zero()];
        for u in units {
            let last = gains.last().unwrap().clone();
            gains.push(last + u);
        }
        let price = schedule.at(t);
        let hold_costs: Vec<Rational> = (0..=bound[t]).map(|s| inst.storage().cost(s)).collect();
        let entering = bound[t - 1];
        let mut row = Vec::with_capacity(entering as usize + 1);
        let mut picks = Vec::with_capacity(entering as usize + 1);
        for held in 0..=entering {
            let mut best: Option<(Score, (u32, u32))> = None;
            for consume in 0..=units.len() as u32 {
                for end in 0..=bound[t] {
                    let buy = end as i64 + consume as i64 - held as i64;
                    if buy < 0 {
                        continue;
                    }
                    let buy = buy as u32;
                    let paid = match price {
                        Price::Finite(p) => p * Rational::from_integer(buy.into()),
                        Price::Skip if buy == 0 => Rational::zero(),
                        Price::Skip => continue,
                    };
                    let stage = Score {
                        utility: &gains[consume as usize] - paid - &hold_costs[end as usize],
                        consumption: consume_sign * consume as i64,
                        neg_storage: -(end as i64),
                        lateness: t as i64 * buy as i64,
                    };
                    let total = stage.plus(&value[t][end as usize]);
                    if best.as_ref().is_none_or(|(b, _)| total > *b) {
                        best = Some((total, (buy, consume)));
                    }
                }
            }
            let (score, pick) = best.expect("holding inventory to consume is always feasible");
            row.push(score);
            picks.push(pick);
        }
        value[t - 1] = row;
        choice[t - 1] = picks;
    }

    let mut purchases = Vec::with_capacity(periods);
    let mut consumption = Vec::with_capacity(periods);
    let mut held = 0u32;
    for picks in &choice {
        let (buy, consume) = picks[held as usize];
        purchases.push(buy);
        consumption.push(consume);
        held = held + buy - consume;
    }
    debug_assert_eq!(held, 0);
    Ok(ConsumerPlan::from_flows(purchases, consumption))
}
