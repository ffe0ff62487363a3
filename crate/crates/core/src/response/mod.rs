//! Utility-maximizing buyer behaviour against a fixed price schedule.
//!
//! Two engines compute best responses: [`best_response_linear`] decouples
//! demand items under linear storage costs, [`best_response_concave`] runs an
//! exact per-buyer dynamic program over inventory levels and accepts any
//! storage table. [`audit_plan`] re-evaluates plans independently of both.
//!
//! Tie-breaking: an indifferent buyer buys (configurable through
//! [`TieBreak`]); among equally good plans the one with least storage wins,
//! then the one acquiring latest.

mod audit;
mod concave;
mod linear;

use serde::Serialize;

pub use audit::{audit_plan, AuditReport};
pub use concave::{best_response_concave, best_response_concave_with};
pub use linear::{best_response_linear, best_response_linear_with, effective_price};

use crate::error::Result;
use crate::model::{format_rational, MarketInstance, PriceSchedule, Rational};

/// How a buyer resolves exact indifference between buying and not buying.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    Buy,
    Abstain,
}

/// Purchases, consumption and end-of-period storage of one buyer, indexed by
/// period (`purchases[t - 1]` for period `t`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ConsumerPlan {
    pub purchases: Vec<u32>,
    pub consumption: Vec<u32>,
    pub storage: Vec<u32>,
}

impl ConsumerPlan {
    pub fn empty(periods: usize) -> Self {
        Self { purchases: vec![0; periods], consumption: vec![0; periods], storage: vec![0; periods] }
    }

    /// Builds a plan from purchases and consumption, deriving storage.
    /// Storage may go negative in an infeasible plan; it saturates at zero here
    /// and [`audit_plan`] reports the violation.
    pub fn from_flows(purchases: Vec<u32>, consumption: Vec<u32>) -> Self {
        let mut level: i64 = 0;
        let storage = purchases
            .iter()
            .zip(&consumption)
            .map(|(&q, &x)| {
                level += q as i64 - x as i64;
                level.max(0) as u32
            })
            .collect();
        Self { purchases, consumption, storage }
    }

    pub fn total_storage(&self) -> u64 {
        self.storage.iter().map(|&s| s as u64).sum()
    }
}

/// Aggregate market result of a schedule and the buyers' plans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarketOutcome {
    pub plans: Vec<ConsumerPlan>,
    pub utilities: Vec<Rational>,
    pub revenue: Rational,
    pub consumer_surplus: Rational,
    pub total_storage: u64,
    pub storage_cost_paid: Rational,
}

impl MarketOutcome {
    /// Evaluates feasible plans; panics on an infeasible plan, which the
    /// engines never produce.
    pub(crate) fn evaluate(inst: &MarketInstance, schedule: &PriceSchedule, plans: Vec<ConsumerPlan>) -> Result<Self> {
        let report = audit_plan(inst, schedule, &plans)?;
        assert!(report.feasible, "engine produced an infeasible plan: {:?}", report.violations);
        Ok(Self {
            total_storage: plans.iter().map(ConsumerPlan::total_storage).sum(),
            plans,
            consumer_surplus: report.utilities.iter().sum(),
            utilities: report.utilities,
            revenue: report.revenue,
            storage_cost_paid: report.storage_cost,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "revenue": format_rational(&self.revenue),
            "consumer_surplus": format_rational(&self.consumer_surplus),
            "total_storage": self.total_storage,
            "storage_cost_paid": format_rational(&self.storage_cost_paid),
            "utilities": self.utilities.iter().map(format_rational).collect::<Vec<_>>(),
            "plans": self.plans,
        })
    }
}

/// Best response with the engine matching the instance's storage model.
pub fn best_response(inst: &MarketInstance, schedule: &PriceSchedule) -> Result<MarketOutcome> {
    match inst.storage().linear_rate() {
        Some(_) => best_response_linear(inst, schedule),
        None => best_response_concave(inst, schedule),
    }
}
