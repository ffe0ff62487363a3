use num_traits::Zero;

use super::profile::{advance, check_action, stage_revenue, stage_utility, BuyerAction, GameState, StrategyProfile};
use crate::error::{Error, Result};
use crate::model::{MarketInstance, Price, PriceSchedule, Rational};
use crate::response::{ConsumerPlan, MarketOutcome};

/// Retailer and buyer payoffs accumulated from some state to the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Payoffs {
    pub retailer: Rational,
    pub buyers: Vec<Rational>,
}

impl Payoffs {
    pub(crate) fn zero(buyers: usize) -> Self {
        Self { retailer: Rational::zero(), buyers: vec![Rational::zero(); buyers] }
    }
}

/// Realized play of a strategy profile.
#[derive(Clone, Debug)]
pub struct SimulationResult {
    pub revenue: Rational,
    pub prices: Vec<Price>,
    /// Units sold per period.
    pub sales: Vec<u32>,
    pub outcome: MarketOutcome,
}

/// Plays the profile from the initial state.
pub fn simulate_profile(inst: &MarketInstance, profile: &StrategyProfile) -> Result<SimulationResult> {
    check_profile(inst, profile)?;
    let periods = inst.periods();
    let buyers = inst.buyers();
    let mut state = GameState::initial(inst);
    let mut prices = Vec::with_capacity(periods);
    let mut sales = Vec::with_capacity(periods);
    let mut purchases = vec![Vec::with_capacity(periods); buyers];
    let mut consumption = vec![Vec::with_capacity(periods); buyers];
    let mut revenue = Rational::zero();
    while !state.is_terminal(inst) {
        let price = profile.retailer.price(inst, &state);
        let actions = respond(inst, profile, &state, &price, None)?;
        revenue += stage_revenue(&price, &actions);
        sales.push(actions.iter().map(|a| a.buy).sum());
        for (i, a) in actions.iter().enumerate() {
            purchases[i].push(a.buy);
            consumption[i].push(a.consume);
        }
        prices.push(price);
        state = advance(&state, &actions);
    }
    let plans = purchases.into_iter().zip(consumption).map(|(q, x)| ConsumerPlan::from_flows(q, x)).collect();
    let outcome = MarketOutcome::evaluate(inst, &PriceSchedule::new(prices.clone()), plans)?;
    debug_assert_eq!(outcome.revenue, revenue);
    Ok(SimulationResult { revenue, prices, sales, outcome })
}

/// Plays the profile from `state`, optionally forcing the first announced
/// price and one buyer's first action, and returns the payoffs from there on.
pub fn play_from(
    inst: &MarketInstance,
    profile: &StrategyProfile,
    state: &GameState,
    forced_price: Option<&Price>,
    forced_action: Option<(usize, BuyerAction)>,
) -> Result<Payoffs> {
    check_profile(inst, profile)?;
    let mut payoffs = Payoffs::zero(inst.buyers());
    let mut state = state.clone();
    let mut first = true;
    while !state.is_terminal(inst) {
        let price = match forced_price {
            Some(p) if first => p.clone(),
            _ => profile.retailer.price(inst, &state),
        };
        let actions = respond(inst, profile, &state, &price, forced_action.filter(|_| first))?;
        accumulate(inst, &state, &price, &actions, &mut payoffs);
        state = advance(&state, &actions);
        first = false;
    }
    Ok(payoffs)
}

pub(crate) fn check_profile(inst: &MarketInstance, profile: &StrategyProfile) -> Result<()> {
    if profile.buyers.len() != inst.buyers() {
        return Err(Error::DimensionMismatch(format!(
            "profile has {} buyer strategies, instance has {} buyers",
            profile.buyers.len(),
            inst.buyers()
        )));
    }
    Ok(())
}

/// Profile actions at `state` under `price`, with an optional override; all
/// actions are checked against the rules.
pub(crate) fn respond(
    inst: &MarketInstance,
    profile: &StrategyProfile,
    state: &GameState,
    price: &Price,
    forced: Option<(usize, BuyerAction)>,
) -> Result<Vec<BuyerAction>> {
    (0..inst.buyers())
        .map(|i| {
            let action = match forced {
                Some((j, a)) if j == i => a,
                _ => profile.buyers[i].act(inst, state, i, price),
            };
            check_action(inst, state, i, price, action)?;
            Ok(action)
        })
        .collect()
}

pub(crate) fn accumulate(inst: &MarketInstance, state: &GameState, price: &Price, actions: &[BuyerAction], into: &mut Payoffs) {
    into.retailer += stage_revenue(price, actions);
    for (i, a) in actions.iter().enumerate() {
        into.buyers[i] += stage_utility(inst, state, i, price, *a);
    }
}
