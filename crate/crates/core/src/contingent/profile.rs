use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{rat, MarketInstance, Price, Rational};

/// One buyer's position at the start of a period.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BuyerState {
    pub inventory: u32,
    /// Bit `t - 1` is set once the buyer has consumed in period `t`.
    pub consumed: u64,
}

impl BuyerState {
    pub fn has_consumed(&self) -> bool {
        self.consumed != 0
    }
}

/// Payoff-relevant state of the contingent game at the start of `period`
/// (`periods + 1` once the game is over). Strategies read only this; the
/// realized price history is reported by the simulator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    pub period: usize,
    pub buyers: Vec<BuyerState>,
}

impl GameState {
    pub fn initial(inst: &MarketInstance) -> Self {
        Self { period: 1, buyers: vec![BuyerState::default(); inst.buyers()] }
    }

    pub fn is_terminal(&self, inst: &MarketInstance) -> bool {
        self.period > inst.periods()
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} inventory=[", self.period)?;
        for (i, b) in self.buyers.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", b.inventory)?;
        }
        write!(f, "]")
    }
}

/// Units bought and consumed by one buyer in one period.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct BuyerAction {
    pub buy: u32,
    pub consume: u32,
}

impl BuyerAction {
    pub const IDLE: BuyerAction = BuyerAction { buy: 0, consume: 0 };

    pub fn new(buy: u32, consume: u32) -> Self {
        Self { buy, consume }
    }
}

impl fmt::Display for BuyerAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "buy {} consume {}", self.buy, self.consume)
    }
}

pub trait RetailerStrategy: Send + Sync {
    fn price(&self, inst: &MarketInstance, state: &GameState) -> Price;
}

pub trait BuyerStrategy: Send + Sync {
    fn act(&self, inst: &MarketInstance, state: &GameState, buyer: usize, price: &Price) -> BuyerAction;
}

impl<F> RetailerStrategy for F
where
    F: Fn(&MarketInstance, &GameState) -> Price + Send + Sync,
{
    fn price(&self, inst: &MarketInstance, state: &GameState) -> Price {
        self(inst, state)
    }
}

impl<F> BuyerStrategy for F
where
    F: Fn(&MarketInstance, &GameState, usize, &Price) -> BuyerAction + Send + Sync,
{
    fn act(&self, inst: &MarketInstance, state: &GameState, buyer: usize, price: &Price) -> BuyerAction {
        self(inst, state, buyer, price)
    }
}

/// Pure strategies for the retailer and every buyer.
pub struct StrategyProfile {
    pub name: String,
    pub retailer: Box<dyn RetailerStrategy>,
    pub buyers: Vec<Box<dyn BuyerStrategy>>,
}

pub const BUILTIN_PROFILES: [&str; 3] = ["table1-threat", "table1-unconditional", "pacman"];

impl StrategyProfile {
    pub fn new(name: impl Into<String>, retailer: Box<dyn RetailerStrategy>, buyers: Vec<Box<dyn BuyerStrategy>>) -> Self {
        Self { name: name.into(), retailer, buyers }
    }

    /// Looks up a built-in profile by name (see [`BUILTIN_PROFILES`]).
    pub fn builtin(name: &str, inst: &MarketInstance) -> Result<Self> {
        match name {
            "table1-threat" => table1_profile(inst, true),
            "table1-unconditional" => table1_profile(inst, false),
            "pacman" => Ok(pacman_profile(inst)),
            other => Err(Error::Format(format!(
                "unknown profile `{other}`; expected one of {}",
                BUILTIN_PROFILES.join(", ")
            ))),
        }
    }
}

impl fmt::Debug for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StrategyProfile").field("name", &self.name).field("buyers", &self.buyers.len()).finish()
    }
}

/// Every action available to `buyer` at `state` under `price`: consume at
/// most the positive units of the period and what is on hand, end with at
/// most `min(cap, remaining demand)` units, buy nothing at skip.
pub fn feasible_actions(inst: &MarketInstance, state: &GameState, buyer: usize, price: &Price, cap: u32) -> Vec<BuyerAction> {
    let t = state.period;
    let held = state.buyers[buyer].inventory;
    let units = inst.units(buyer, t).len() as u32;
    let end_cap = cap.min(inst.demand_after(buyer, t));
    let mut out = Vec::new();
    for end in 0..=end_cap {
        for consume in 0..=units {
            let Some(buy) = (end + consume).checked_sub(held) else { continue };
            if price.is_skip() && buy > 0 {
                continue;
            }
            out.push(BuyerAction { buy, consume });
        }
    }
    out
}

/// Checks an action against the game rules (no inventory cap).
pub(crate) fn check_action(inst: &MarketInstance, state: &GameState, buyer: usize, price: &Price, action: BuyerAction) -> Result<()> {
    let t = state.period;
    let held = state.buyers[buyer].inventory;
    let fail = |why: &str| Err(Error::InfeasibleAction(format!("buyer {buyer} at {state}: {action}: {why}")));
    if price.is_skip() && action.buy > 0 {
        return fail("purchase at a skipped period");
    }
    if action.consume as usize > inst.units(buyer, t).len() {
        return fail("consumes more than the period's demand");
    }
    if action.consume > held + action.buy {
        return fail("consumes more than on hand");
    }
    if held + action.buy - action.consume > inst.demand_after(buyer, t) {
        return fail("stores more than the remaining demand");
    }
    Ok(())
}

/// State after one period of play.
pub(crate) fn advance(state: &GameState, actions: &[BuyerAction]) -> GameState {
    let t = state.period;
    GameState {
        period: t + 1,
        buyers: state
            .buyers
            .iter()
            .zip(actions)
            .map(|(b, a)| BuyerState {
                inventory: b.inventory + a.buy - a.consume,
                consumed: if a.consume > 0 { b.consumed | (1 << (t - 1)) } else { b.consumed },
            })
            .collect(),
    }
}

/// Buyer's stage payoff: consumed values minus payment minus storage cost.
pub(crate) fn stage_utility(inst: &MarketInstance, state: &GameState, buyer: usize, price: &Price, action: BuyerAction) -> Rational {
    let t = state.period;
    let mut u: Rational = inst.units(buyer, t).iter().take(action.consume as usize).sum();
    if let Price::Finite(p) = price {
        u -= p * Rational::from_integer(action.buy.into());
    }
    let end = state.buyers[buyer].inventory + action.buy - action.consume;
    u - inst.storage().cost(end)
}

pub(crate) fn stage_revenue(price: &Price, actions: &[BuyerAction]) -> Rational {
    match price {
        Price::Finite(p) => p * Rational::from_integer(actions.iter().map(|a| a.buy).sum::<u32>().into()),
        Price::Skip => Rational::zero(),
    }
}

fn own_value(inst: &MarketInstance, buyer: usize, t: usize) -> Option<&Rational> {
    inst.units(buyer, t).first()
}

/// Buys one unit when the price is within the period's value, consuming a held unit first.
fn myopic(inst: &MarketInstance, state: &GameState, buyer: usize, price: &Price) -> BuyerAction {
    let t = state.period;
    let Some(v) = own_value(inst, buyer, t) else { return BuyerAction::IDLE };
    if state.buyers[buyer].inventory > 0 {
        return BuyerAction::new(0, 1);
    }
    match price {
        Price::Finite(p) if p <= v => BuyerAction::new(1, 1),
        _ => BuyerAction::IDLE,
    }
}

fn table1_profile(inst: &MarketInstance, threat: bool) -> Result<StrategyProfile> {
    if inst.periods() != 2 || inst.buyers() != 2 || inst.is_single_buyer() {
        return Err(Error::DimensionMismatch("table1 profiles need two buyers and two periods".into()));
    }
    let retailer: Box<dyn RetailerStrategy> = if threat {
        Box::new(|_: &MarketInstance, s: &GameState| match s.period {
            1 => Price::Finite(rat(10)),
            _ if s.buyers[0].inventory > 0 => Price::Finite(rat(4)),
            _ => Price::Finite(rat(15)),
        })
    } else {
        Box::new(|_: &MarketInstance, s: &GameState| Price::Finite(rat(if s.period == 1 { 10 } else { 4 })))
    };
    let stocker = |_: &MarketInstance, s: &GameState, _: usize, price: &Price| -> BuyerAction {
        let Price::Finite(p) = price else {
            return if s.period == 2 && s.buyers[0].inventory > 0 { BuyerAction::new(0, 1) } else { BuyerAction::IDLE };
        };
        if s.period == 1 {
            if *p <= rat(14) {
                BuyerAction::new(2, 1)
            } else if *p <= rat(17) {
                BuyerAction::new(1, 1)
            } else {
                BuyerAction::IDLE
            }
        } else if s.buyers[0].inventory > 0 {
            BuyerAction::new(0, 1)
        } else if *p <= rat(15) {
            BuyerAction::new(1, 1)
        } else {
            BuyerAction::IDLE
        }
    };
    let name = if threat { "table1-threat" } else { "table1-unconditional" };
    Ok(StrategyProfile::new(name, retailer, vec![Box::new(stocker), Box::new(myopic)]))
}

/// Retailer prices at the highest value among buyers who have not bought,
/// even those whose period has passed; buyers get-it-while-you-can: buy one unit at the first acceptable
/// price up to their own period, hold it, consume it when it has value.
fn pacman_profile(inst: &MarketInstance) -> StrategyProfile {
    let retailer = |inst: &MarketInstance, s: &GameState| -> Price {
        (0..inst.buyers())
            .filter(|&i| s.buyers[i].inventory == 0 && !s.buyers[i].has_consumed())
            .filter_map(|i| (1..=inst.periods()).filter_map(|t| own_value(inst, i, t)).max())
            .max()
            .map_or(Price::Skip, |v| Price::Finite(v.clone()))
    };
    let buyer = |inst: &MarketInstance, s: &GameState, i: usize, price: &Price| -> BuyerAction {
        let t = s.period;
        let me = &s.buyers[i];
        let consume_now = own_value(inst, i, t).is_some();
        if me.inventory > 0 {
            return if consume_now { BuyerAction::new(0, 1) } else { BuyerAction::IDLE };
        }
        if me.has_consumed() {
            return BuyerAction::IDLE;
        }
        let wanted = (t..=inst.periods()).find_map(|u| own_value(inst, i, u));
        match (price, wanted) {
            (Price::Finite(p), Some(v)) if p <= v => BuyerAction::new(1, u32::from(consume_now)),
            _ => BuyerAction::IDLE,
        }
    };
    let buyers: Vec<Box<dyn BuyerStrategy>> = (0..inst.buyers()).map(|_| Box::new(buyer) as Box<dyn BuyerStrategy>).collect();
    StrategyProfile::new("pacman", Box::new(retailer), buyers)
}
