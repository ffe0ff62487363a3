use crate::error::Result;
use crate::model::{harmonic, MarketInstance, Rational};
use crate::preannounced::fixed_price_unchecked;

/// Perfect-discrimination revenue against the harmonic fixed-price bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminationBound {
    /// Sum of all positive values: what perfect discrimination extracts.
    pub sum_values: Rational,
    /// `H_l * Pi^F` over the `l` positive demand items.
    pub bound: Rational,
    pub holds: bool,
    pub items: usize,
    pub fixed_revenue: Rational,
}

/// No mechanism earns more than `sum_values`; that sum never exceeds
/// `H_l` times the best fixed-price revenue.
pub fn discrimination_upper_bound(inst: &MarketInstance) -> Result<DiscriminationBound> {
    let values = inst.positive_values();
    let sum_values: Rational = values.iter().sum();
    let (_, fixed_revenue) = fixed_price_unchecked(inst);
    let bound = harmonic(values.len()) * &fixed_revenue;
    Ok(DiscriminationBound { holds: sum_values <= bound, sum_values, bound, items: values.len(), fixed_revenue })
}
