use num_traits::Zero;

use super::ConsumerPlan;
use crate::error::{Error, Result};
use crate::model::{DemandSide, MarketInstance, Price, PriceSchedule, Rational};

/// Independent evaluation of buyer plans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    /// Per buyer: consumption utility minus payments minus storage costs.
    pub utilities: Vec<Rational>,
    pub revenue: Rational,
    pub storage_cost: Rational,
    pub feasible: bool,
    pub violations: Vec<String>,
}

/// Recomputes `sum_t U(x_t, t) - p_t q_t - C(S_t)` for each buyer and checks
/// the storage identity `S_t = S_{t-1} + q_t - x_t`, `S_t >= 0`, per-period
/// consumption caps and that nothing is bought in a skipped period.
pub fn audit_plan(inst: &MarketInstance, schedule: &PriceSchedule, plans: &[ConsumerPlan]) -> Result<AuditReport> {
    let periods = inst.periods();
    schedule.check_len(periods)?;
    if plans.len() != inst.buyers() {
        return Err(Error::DimensionMismatch(format!("{} plans for {} buyers", plans.len(), inst.buyers())));
    }
    let cap = match inst.demand() {
        DemandSide::MultiBuyer { .. } => 1,
        DemandSide::SingleBuyer { marginals } => marginals.len() as u32,
    };

    let mut violations = Vec::new();
    let mut utilities = Vec::with_capacity(plans.len());
    let mut revenue = Rational::zero();
    let mut storage_cost = Rational::zero();
    for (buyer, plan) in plans.iter().enumerate() {
        if plan.purchases.len() != periods || plan.consumption.len() != periods || plan.storage.len() != periods {
            return Err(Error::DimensionMismatch(format!("plan of buyer {buyer} does not span {periods} periods")));
        }
        let mut utility = Rational::zero();
        let mut level: i64 = 0;
        for t in 1..=periods {
            let (q, x, s) = (plan.purchases[t - 1], plan.consumption[t - 1], plan.storage[t - 1]);
            level += q as i64 - x as i64;
            if level < 0 {
                violations.push(format!("buyer {buyer}: negative storage at period {t}"));
            }
            if level != s as i64 {
                violations.push(format!("buyer {buyer}: storage {s} at period {t} breaks the flow identity ({level})"));
            }
            if x > cap {
                violations.push(format!("buyer {buyer}: consumes {x} units at period {t}, cap {cap}"));
            }
            match schedule.at(t) {
                Price::Finite(p) => {
                    let paid = p * Rational::from_integer(q.into());
                    utility -= &paid;
                    revenue += paid;
                }
                Price::Skip if q > 0 => {
                    violations.push(format!("buyer {buyer}: buys {q} units in skipped period {t}"));
                }
                Price::Skip => {}
            }
            let consumed: Rational = inst.units(buyer, t).iter().take(x as usize).sum();
            utility += consumed;
            let held = inst.storage().cost(s);
            utility -= &held;
            storage_cost += held;
        }
        utilities.push(utility);
    }
    Ok(AuditReport { utilities, revenue, storage_cost, feasible: violations.is_empty(), violations })
}
