use std::cmp::Ordering;

use num_traits::Zero;

use super::grid::PriceGrid;
use crate::error::{Error, Result};
use crate::model::{MarketInstance, Price, Rational};
use crate::response::ConsumerPlan;

const MAX_WORK: u128 = 200_000_000;

/// Equilibrium path of the single-buyer contingent game on a price grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpneSolution {
    pub revenue: Rational,
    pub buyer_utility: Rational,
    pub prices: Vec<Price>,
    pub plan: ConsumerPlan,
}

#[derive(Clone)]
struct Node {
    price: Price,
    buy: u32,
    consume: u32,
    end: u32,
    retailer: Rational,
    buyer: Rational,
}

/// Backward induction over `(period, inventory)`.
///
/// At each node the retailer tries every grid price; the buyer answers with
/// the purchase and consumption maximizing her utility plus her equilibrium
/// continuation. Buyer ties go to the larger purchase, then to less storage.
/// Retailer ties go to the lower buyer utility, then to the higher price.
pub fn solve_spne_single_buyer(inst: &MarketInstance, grid: &PriceGrid) -> Result<SpneSolution> {
    if !inst.is_single_buyer() {
        return Err(Error::MultiBuyerNotSupported);
    }
    let periods = inst.periods();
    if grid.periods() != periods {
        return Err(Error::DimensionMismatch(format!("grid has {} periods, instance has {periods}", grid.periods())));
    }
    let bound = |t: usize| inst.demand_after(0, t);
    let work: u128 = (1..=periods)
        .map(|t| {
            let states = bound(t - 1) as u128 + 1;
            let actions = (bound(t) as u128 + 1) * (inst.units(0, t).len() as u128 + 1);
            states * actions * grid.at(t).len() as u128
        })
        .sum();
    if work > MAX_WORK {
        return Err(Error::StateSpaceTooLarge(format!("{work} buyer replies to evaluate, limit {MAX_WORK}")));
    }

    // nodes[t - 1][s]: equilibrium play at period t entering with s units
    let mut nodes: Vec<Vec<Node>> = vec![Vec::new(); periods];
    let mut next_retailer = vec![Rational::zero(); bound(periods) as usize + 1];
    let mut next_buyer = next_retailer.clone();
    for t in (1..=periods).rev() {
        let units = inst.units(0, t);
        let mut gain = vec![Rational::zero()];
        for v in units {
            gain.push(gain.last().unwrap() + v);
        }
        let end_cap = bound(t);
        let storage: Vec<Rational> = (0..=end_cap).map(|e| inst.storage().cost(e)).collect();
        let row: Vec<Node> = (0..=bound(t - 1))
            .map(|held| {
                let mut best: Option<Node> = None;
                for price in grid.at(t) {
                    let reply = buyer_reply(price, held, units.len() as u32, end_cap, &gain, &storage, &next_buyer);
                    let Some((buy, consume, end, buyer)) = reply else { continue };
                    let retailer = match price {
                        Price::Finite(p) => p * Rational::from_integer(buy.into()),
                        Price::Skip => Rational::zero(),
                    } + &next_retailer[end as usize];
                    let node = Node { price: price.clone(), buy, consume, end, retailer, buyer };
                    let wins = match &best {
                        None => true,
                        Some(b) => node
                            .retailer
                            .cmp(&b.retailer)
                            .then_with(|| b.buyer.cmp(&node.buyer))
                            .then_with(|| node.price.cmp(&b.price))
                            == Ordering::Greater,
                    };
                    if wins {
                        best = Some(node);
                    }
                }
                best.expect("skip is always in the grid")
            })
            .collect();
        next_retailer = row.iter().map(|n| n.retailer.clone()).collect();
        next_buyer = row.iter().map(|n| n.buyer.clone()).collect();
        nodes[t - 1] = row;
    }

    let mut held = 0u32;
    let mut prices = Vec::with_capacity(periods);
    let mut purchases = Vec::with_capacity(periods);
    let mut consumption = Vec::with_capacity(periods);
    for row in &nodes {
        let node = &row[held as usize];
        prices.push(node.price.clone());
        purchases.push(node.buy);
        consumption.push(node.consume);
        held = node.end;
    }
    let root = &nodes[0][0];
    Ok(SpneSolution {
        revenue: root.retailer.clone(),
        buyer_utility: root.buyer.clone(),
        prices,
        plan: ConsumerPlan::from_flows(purchases, consumption),
    })
}

/// Best `(buy, consume, end, utility)` for a buyer holding `held` units.
fn buyer_reply(
    price: &Price,
    held: u32,
    units: u32,
    end_cap: u32,
    gain: &[Rational],
    storage: &[Rational],
    next_buyer: &[Rational],
) -> Option<(u32, u32, u32, Rational)> {
    let mut best: Option<(u32, u32, u32, Rational)> = None;
    for end in 0..=end_cap {
        for consume in 0..=units {
            let Some(buy) = (end + consume).checked_sub(held) else { continue };
            let paid = match price {
                Price::Finite(p) => p * Rational::from_integer(buy.into()),
                Price::Skip if buy == 0 => Rational::zero(),
                Price::Skip => continue,
            };
            let utility = &gain[consume as usize] - paid - &storage[end as usize] + &next_buyer[end as usize];
            let wins = match &best {
                None => true,
                Some((b_buy, _, b_end, b_u)) => {
                    utility.cmp(b_u).then_with(|| buy.cmp(b_buy)).then_with(|| b_end.cmp(&end)) == Ordering::Greater
                }
            };
            if wins {
                best = Some((buy, consume, end, utility));
            }
        }
    }
    best
}
