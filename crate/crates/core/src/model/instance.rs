use num_traits::{Signed, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Per-period storage cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StorageCost {
    /// `c` per unit held per period.
    Linear { c: Rational },
    /// `cum[q]` is the cost of holding `q` units for one period. Levels past
    /// the end of the table extend the last marginal.
    ConcaveTable { cum: Vec<Rational> },
}

impl StorageCost {
    /// Cost of holding `units` for one period.
    pub fn cost(&self, units: u32) -> Rational {
        match self {
            StorageCost::Linear { c } => c * Rational::from_integer(units.into()),
            StorageCost::ConcaveTable { cum } => {
                let q = units as usize;
                if q < cum.len() {
                    return cum[q].clone();
                }
                let last = cum.len() - 1;
                let tail = if last == 0 { Rational::zero() } else { &cum[last] - &cum[last - 1] };
                &cum[last] + tail * Rational::from_integer(((q - last) as u64).into())
            }
        }
    }

    /// Cost of one extra unit when `units` are already held.
    pub fn marginal(&self, units: u32) -> Rational {
        self.cost(units + 1) - self.cost(units)
    }

    pub fn linear_rate(&self) -> Option<&Rational> {
        match self {
            StorageCost::Linear { c } => Some(c),
            StorageCost::ConcaveTable { .. } => None,
        }
    }

    /// Distinct marginal costs the table can produce.
    pub fn distinct_marginals(&self) -> Vec<Rational> {
        match self {
            StorageCost::Linear { c } => vec![c.clone()],
            StorageCost::ConcaveTable { cum } => {
                let mut out: Vec<Rational> = (0..cum.len().max(2) as u32 - 1).map(|q| self.marginal(q)).collect();
                out.sort();
                out.dedup();
                out
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            StorageCost::Linear { c } => {
                if c.is_negative() {
                    return Err(Error::NegativeValue(format!("storage cost c = {}", format_rational(c))));
                }
            }
            StorageCost::ConcaveTable { cum } => {
                if cum.first().is_none_or(|c0| !c0.is_zero()) {
                    return Err(Error::NonConcaveStorage("cum[0] must be 0".into()));
                }
                let marginals: Vec<Rational> = cum.windows(2).map(|w| &w[1] - &w[0]).collect();
                if let Some(q) = marginals.iter().position(|m| m.is_negative()) {
                    return Err(Error::NonConcaveStorage(format!("marginal cost at level {q} is negative")));
                }
                if let Some(q) = marginals.windows(2).position(|w| w[1] > w[0]) {
                    return Err(Error::NonConcaveStorage(format!(
                        "marginal cost rises from {} to {} at level {}",
                        format_rational(&marginals[q]),
                        format_rational(&marginals[q + 1]),
                        q + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Who demands the good.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemandSide {
    /// `values[i][t]`: utility of buyer `i` for one unit consumed in period `t + 1`.
    MultiBuyer { values: Vec<Vec<Rational>> },
    /// `marginals[j][t]`: marginal utility of the `(j + 1)`-th unit consumed in
    /// period `t + 1`. Rows past the table are zero.
    SingleBuyer { marginals: Vec<Vec<Rational>> },
}

/// Values of one period in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedRow {
    pub values: Vec<Rational>,
    /// Multi-buyer only: `order[k]` is the buyer holding the `k + 1`-th highest value.
    /// Equal values keep buyer-index order.
    pub order: Option<Vec<usize>>,
}

/// A validated market: horizon, storage cost and demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarketInstance {
    periods: usize,
    storage: StorageCost,
    demand: DemandSide,
    ranked: Vec<RankedRow>,
    /// `units[i][t]`: positive marginal values of buyer `i` in period `t + 1`, decreasing.
    units: Vec<Vec<Vec<Rational>>>,
}

impl MarketInstance {
    /// Validates the raw fields and builds the instance.
    pub fn new(periods: usize, storage: StorageCost, demand: DemandSide) -> Result<Self> {
        if periods == 0 {
            return Err(Error::DimensionMismatch("horizon must have at least one period".into()));
        }
        storage.validate()?;
        let rows = match &demand {
            DemandSide::MultiBuyer { values } => values,
            DemandSide::SingleBuyer { marginals } => marginals,
        };
        if rows.is_empty() {
            return Err(Error::DimensionMismatch("demand matrix has no rows".into()));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != periods {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {periods}",
                    row.len()
                )));
            }
            if let Some(t) = row.iter().position(|v| v.is_negative()) {
                return Err(Error::NegativeValue(format!(
                    "row {r}, period {} has value {}",
                    t + 1,
                    format_rational(&row[t])
                )));
            }
        }
        if let DemandSide::SingleBuyer { marginals } = &demand {
            for t in 0..periods {
                for j in 1..marginals.len() {
                    if marginals[j][t] > marginals[j - 1][t] {
                        return Err(Error::NonMonotoneMarginals(format!(
                            "period {}: unit {} has {} after {}",
                            t + 1,
                            j + 1,
                            format_rational(&marginals[j][t]),
                            format_rational(&marginals[j - 1][t])
                        )));
                    }
                }
            }
        }

        let ranked = (0..periods).map(|t| rank_period(&demand, t)).collect();
        let units = match &demand {
            DemandSide::MultiBuyer { values } => values
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| if v.is_zero() { Vec::new() } else { vec![v.clone()] })
                        .collect()
                })
                .collect(),
            DemandSide::SingleBuyer { marginals } => vec![(0..periods)
                .map(|t| marginals.iter().map(|row| row[t].clone()).filter(|v| !v.is_zero()).collect())
                .collect()],
        };
        Ok(Self { periods, storage, demand, ranked, units })
    }

    pub fn periods(&self) -> usize {
        self.periods
    }

    pub fn storage(&self) -> &StorageCost {
        &self.storage
    }

    pub fn demand(&self) -> &DemandSide {
        &self.demand
    }

    pub fn is_single_buyer(&self) -> bool {
        matches!(self.demand, DemandSide::SingleBuyer { .. })
    }

    /// Number of strategic buyers (1 for the single-buyer model).
    pub fn buyers(&self) -> usize {
        self.units.len()
    }

    /// Number of items per period in the ranked view: `N` or `H`.
    pub fn ranks(&self) -> usize {
        self.ranked[0].values.len()
    }

    /// Positive marginal values of `buyer` at 1-based period `t`, decreasing.
    pub fn units(&self, buyer: usize, t: usize) -> &[Rational] {
        &self.units[buyer][t - 1]
    }

    /// Units `buyer` still wants to consume strictly after period `t`.
    pub fn demand_after(&self, buyer: usize, t: usize) -> u32 {
        self.units[buyer][t.min(self.periods)..].iter().map(|u| u.len() as u32).sum()
    }

    /// Ranked values of 1-based period `t` (no range check).
    pub fn ranked_row(&self, t: usize) -> &RankedRow {
        &self.ranked[t - 1]
    }

    /// Every positive value, pooled over buyers and periods.
    pub fn positive_values(&self) -> Vec<Rational> {
        self.ranked.iter().flat_map(|row| row.values.iter().filter(|v| !v.is_zero()).cloned()).collect()
    }

    pub fn max_value(&self) -> Rational {
        self.ranked.iter().filter_map(|row| row.values.first()).max().cloned().unwrap_or_default()
    }

    pub fn check_period(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.periods {
            return Err(Error::PeriodOutOfRange { period: t, periods: self.periods });
        }
        Ok(())
    }
}

fn rank_period(demand: &DemandSide, t: usize) -> RankedRow {
    match demand {
        DemandSide::MultiBuyer { values } => {
            let mut order: Vec<usize> = (0..values.len()).collect();
            // stable: equal values keep buyer order
            order.sort_by(|&a, &b| values[b][t].cmp(&values[a][t]));
            RankedRow { values: order.iter().map(|&i| values[i][t].clone()).collect(), order: Some(order) }
        }
        DemandSide::SingleBuyer { marginals } => {
            RankedRow { values: marginals.iter().map(|row| row[t].clone()).collect(), order: None }
        }
    }
}

/// Values of period `t` in decreasing order (with the ranking permutation for
/// multiple buyers).
pub fn ranked_values(inst: &MarketInstance, t: usize) -> Result<RankedRow> {
    inst.check_period(t)?;
    Ok(inst.ranked_row(t).clone())
}

/// Number of demand items with positive value.
pub fn demand_size(inst: &MarketInstance) -> usize {
    inst.ranked.iter().map(|row| row.values.iter().filter(|v| !v.is_zero()).count()).sum()
}
