use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{MarketInstance, Rational};

/// Best constant price `p` and its revenue `p * #{items with value >= p}`.
///
/// A constant schedule never makes storage worthwhile, so every item is
/// bought in its own period. Equal revenues go to the higher price; an
/// instance without positive values gives `(0, 0)`.
pub fn best_fixed_price(inst: &MarketInstance) -> Result<(Rational, Rational)> {
    inst.storage().linear_rate().ok_or(Error::ConcaveNotSupported)?;
    Ok(fixed_price_unchecked(inst))
}

/// Same computation for any storage model.
pub(crate) fn fixed_price_unchecked(inst: &MarketInstance) -> (Rational, Rational) {
    let mut values = inst.positive_values();
    values.sort_by(|a, b| b.cmp(a));
    let mut best = (Rational::zero(), Rational::zero());
    // values[k] is the price at which exactly the first k + 1 (plus ties) sell
    let mut k = 0;
    while k < values.len() {
        let p = values[k].clone();
        while k < values.len() && values[k] == p {
            k += 1;
        }
        let revenue = &p * Rational::from_integer(k.into());
        if revenue > best.1 {
            best = (p, revenue);
        }
    }
    best
}
