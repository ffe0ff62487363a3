use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::grid::PriceGrid;
use super::profile::{advance, feasible_actions, stage_revenue, stage_utility, BuyerAction, BuyerState, GameState, StrategyProfile};
use super::simulate::{accumulate, check_profile, play_from, respond, simulate_profile, Payoffs};
use crate::error::{Error, Result};
use crate::model::{MarketInstance, Price, Rational};

/// Limits of the deviation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Largest inventory a buyer may end a period with.
    pub inventory_cap: u32,
    /// Largest number of states the search may visit.
    pub max_states: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { inventory_cap: 2, max_states: 2_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetailerDeviation {
    pub state: GameState,
    pub price: Price,
    pub gain: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuyerDeviation {
    pub buyer: usize,
    pub state: GameState,
    /// Price announced at the state (the profile's or any grid price).
    pub price: Price,
    pub action: BuyerAction,
    pub gain: Rational,
}

#[derive(Clone, Debug)]
pub struct CertificationReport {
    /// No retailer or buyer one-shot deviation strictly gains.
    pub certified: bool,
    pub grid: PriceGrid,
    pub worst_retailer: Option<RetailerDeviation>,
    pub worst_buyer: Option<BuyerDeviation>,
    /// Most profitable buyer deviation along the equilibrium path, at the
    /// profile's own prices.
    pub worst_on_path_buyer: Option<BuyerDeviation>,
    pub states_examined: usize,
    pub on_path_revenue: Rational,
    pub consumer_surplus: Rational,
}

/// One-shot deviation check of a profile over every state reachable by any
/// grid price sequence and any feasible buyer actions.
///
/// Continuation payoffs under the profile are computed backward; at each state
/// the retailer tries every grid price and each buyer every alternative action
/// under every grid price. Zero gains do not refute.
pub fn certify_spne(inst: &MarketInstance, profile: &StrategyProfile, grid: &PriceGrid, options: CertifyOptions) -> Result<CertificationReport> {
    check_profile(inst, profile)?;
    if grid.periods() != inst.periods() {
        return Err(Error::DimensionMismatch(format!("grid has {} periods, instance has {}", grid.periods(), inst.periods())));
    }
    let layers = reachable_states(inst, grid, options)?;
    let periods = inst.periods();

    // continuation payoffs, latest period first
    let mut value: HashMap<GameState, Payoffs> = HashMap::new();
    for t in (1..=periods).rev() {
        let computed: Vec<(GameState, Payoffs)> = layers[t - 1]
            .par_iter()
            .map(|s| {
                let price = profile.retailer.price(inst, s);
                let actions = respond(inst, profile, s, &price, None)?;
                let mut p = continuation(inst, profile, &value, &advance(s, &actions))?;
                accumulate(inst, s, &price, &actions, &mut p);
                Ok((s.clone(), p))
            })
            .collect::<Result<_>>()?;
        value.extend(computed);
    }

    let per_state: Vec<(Option<RetailerDeviation>, Option<BuyerDeviation>)> = layers
        .par_iter()
        .flatten()
        .map(|s| check_state(inst, profile, grid, options, &value, s))
        .collect::<Result<_>>()?;
    let mut worst_retailer: Option<RetailerDeviation> = None;
    let mut worst_buyer: Option<BuyerDeviation> = None;
    for (r, b) in per_state {
        if let Some(r) = r {
            if worst_retailer.as_ref().is_none_or(|w| r.gain > w.gain) {
                worst_retailer = Some(r);
            }
        }
        if let Some(b) = b {
            if worst_buyer.as_ref().is_none_or(|w| b.gain > w.gain) {
                worst_buyer = Some(b);
            }
        }
    }
    let zero = Rational::default();
    let certified = worst_retailer.as_ref().is_none_or(|w| w.gain <= zero) && worst_buyer.as_ref().is_none_or(|w| w.gain <= zero);
    let sim = simulate_profile(inst, profile)?;
    let mut worst_on_path_buyer: Option<BuyerDeviation> = None;
    let mut s = GameState::initial(inst);
    for price in &sim.prices {
        let actions = respond(inst, profile, &s, price, None)?;
        if let Some(b) = worst_buyer_deviation(inst, profile, options, &value, &s, price, &actions)? {
            if worst_on_path_buyer.as_ref().is_none_or(|w| b.gain > w.gain) {
                worst_on_path_buyer = Some(b);
            }
        }
        s = advance(&s, &actions);
    }
    Ok(CertificationReport {
        certified,
        grid: grid.clone(),
        worst_retailer,
        worst_buyer,
        worst_on_path_buyer,
        states_examined: layers.iter().map(Vec::len).sum(),
        on_path_revenue: sim.revenue,
        consumer_surplus: sim.outcome.consumer_surplus,
    })
}

fn continuation(inst: &MarketInstance, profile: &StrategyProfile, value: &HashMap<GameState, Payoffs>, s: &GameState) -> Result<Payoffs> {
    if s.is_terminal(inst) {
        return Ok(Payoffs::zero(inst.buyers()));
    }
    match value.get(s) {
        Some(p) => Ok(p.clone()),
        // only reached when the profile itself stores past the cap
        None => play_from(inst, profile, s, None, None),
    }
}

fn check_state(
    inst: &MarketInstance,
    profile: &StrategyProfile,
    grid: &PriceGrid,
    options: CertifyOptions,
    value: &HashMap<GameState, Payoffs>,
    s: &GameState,
) -> Result<(Option<RetailerDeviation>, Option<BuyerDeviation>)> {
    let here = &value[s];
    let mut prices: Vec<Price> = grid.at(s.period).to_vec();
    let own = profile.retailer.price(inst, s);
    if !prices.contains(&own) {
        prices.push(own);
    }
    let mut worst_retailer: Option<RetailerDeviation> = None;
    let mut worst_buyer: Option<BuyerDeviation> = None;
    for price in &prices {
        let actions = respond(inst, profile, s, price, None)?;
        let next = advance(s, &actions);
        let cont = continuation(inst, profile, value, &next)?;
        let gain = stage_revenue(price, &actions) + &cont.retailer - &here.retailer;
        if worst_retailer.as_ref().is_none_or(|w| gain > w.gain) {
            worst_retailer = Some(RetailerDeviation { state: s.clone(), price: price.clone(), gain });
        }
        if let Some(b) = worst_buyer_deviation(inst, profile, options, value, s, price, &actions)? {
            if worst_buyer.as_ref().is_none_or(|w| b.gain > w.gain) {
                worst_buyer = Some(b);
            }
        }
    }
    Ok((worst_retailer, worst_buyer))
}

/// Best unilateral buyer deviation at `s` under `price`, against the
/// profile's `actions`.
fn worst_buyer_deviation(
    inst: &MarketInstance,
    profile: &StrategyProfile,
    options: CertifyOptions,
    value: &HashMap<GameState, Payoffs>,
    s: &GameState,
    price: &Price,
    actions: &[BuyerAction],
) -> Result<Option<BuyerDeviation>> {
    let cont = continuation(inst, profile, value, &advance(s, actions))?;
    let mut worst: Option<BuyerDeviation> = None;
    for i in 0..inst.buyers() {
        let base = stage_utility(inst, s, i, price, actions[i]) + &cont.buyers[i];
        for alt in feasible_actions(inst, s, i, price, options.inventory_cap) {
            if alt == actions[i] {
                continue;
            }
            let mut deviated = actions.to_vec();
            deviated[i] = alt;
            let after = continuation(inst, profile, value, &advance(s, &deviated))?;
            let gain = stage_utility(inst, s, i, price, alt) + &after.buyers[i] - &base;
            if worst.as_ref().is_none_or(|w| gain > w.gain) {
                worst = Some(BuyerDeviation { buyer: i, state: s.clone(), price: price.clone(), action: alt, gain });
            }
        }
    }
    Ok(worst)
}

/// Joint states per period: the product of each buyer's locally reachable
/// `(inventory, consumed)` pairs, sorted.
fn reachable_states(inst: &MarketInstance, grid: &PriceGrid, options: CertifyOptions) -> Result<Vec<Vec<GameState>>> {
    let periods = inst.periods();
    let buyers = inst.buyers();
    let mut local: Vec<Vec<Vec<BuyerState>>> = vec![vec![vec![BuyerState::default()]]; buyers];
    for t in 1..periods {
        let price = grid.at(t).iter().find(|p| !p.is_skip()).cloned().unwrap_or(Price::Skip);
        for (i, layers) in local.iter_mut().enumerate() {
            let mut next = BTreeSet::new();
            for b in &layers[t - 1] {
                let probe = single_buyer_state(buyers, i, t, b.clone());
                for a in feasible_actions(inst, &probe, i, &price, options.inventory_cap) {
                    next.insert(advance(&probe, &single(buyers, i, a)).buyers[i].clone());
                }
            }
            layers.push(next.into_iter().collect());
        }
    }
    let total: u128 = (0..periods).map(|t| local.iter().map(|l| l[t].len() as u128).product::<u128>()).sum();
    if total > options.max_states as u128 {
        return Err(Error::StateSpaceTooLarge(format!("{total} reachable states, limit {}", options.max_states)));
    }
    Ok((0..periods)
        .map(|t| {
            let mut states = vec![Vec::new()];
            for l in &local {
                states = states
                    .into_iter()
                    .flat_map(|prefix: Vec<BuyerState>| {
                        l[t].iter().map(move |b| {
                            let mut v = prefix.clone();
                            v.push(b.clone());
                            v
                        })
                    })
                    .collect();
            }
            states.into_iter().map(|buyers| GameState { period: t + 1, buyers }).collect()
        })
        .collect())
}

fn single_buyer_state(buyers: usize, i: usize, t: usize, b: BuyerState) -> GameState {
    let mut all = vec![BuyerState::default(); buyers];
    all[i] = b;
    GameState { period: t, buyers: all }
}

fn single(buyers: usize, i: usize, a: BuyerAction) -> Vec<BuyerAction> {
    let mut all = vec![BuyerAction::IDLE; buyers];
    all[i] = a;
    all
}
