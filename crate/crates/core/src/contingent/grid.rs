use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{format_rational, MarketInstance, Price, Rational};

/// Finite candidate prices for each period, ascending, skip last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceGrid {
    periods: Vec<Vec<Price>>,
}

impl PriceGrid {
    /// Builds a grid from explicit candidates; skip is added and duplicates removed.
    pub fn from_candidates(periods: Vec<Vec<Price>>) -> Self {
        Self {
            periods: periods
                .into_iter()
                .map(|row| {
                    let mut set: BTreeSet<Price> = row.into_iter().collect();
                    set.insert(Price::Skip);
                    set.into_iter().collect()
                })
                .collect(),
        }
    }

    /// Candidates of 1-based period `t`.
    pub fn at(&self, t: usize) -> &[Price] {
        &self.periods[t - 1]
    }

    pub fn periods(&self) -> usize {
        self.periods.len()
    }

    /// Total number of candidates over all periods.
    pub fn size(&self) -> usize {
        self.periods.iter().map(Vec::len).sum()
    }

    pub fn rows(&self) -> &[Vec<Price>] {
        &self.periods
    }
}

/// Contour prices anchored at every period, before or after `t`:
/// `v_{j,s} + (t - s) c` when nonnegative, plus skip.
///
/// Under a concave table each period of carrying may cost any marginal the
/// table produces. `refine` adds every multiple of `delta` from 0 up to the
/// sum of all positive values, which bounds any single price worth charging
/// in a contingent game.
pub fn build_price_grid(inst: &MarketInstance, refine: Option<&Rational>) -> Result<PriceGrid> {
    let periods = inst.periods();
    let marginals = inst.storage().distinct_marginals();
    // shift[k]: every sum of k marginals
    let mut shift: Vec<BTreeSet<Rational>> = vec![BTreeSet::from([Rational::zero()])];
    for k in 1..periods {
        let next = shift[k - 1].iter().flat_map(|s| marginals.iter().map(move |m| s + m)).collect();
        shift.push(next);
    }
    let mut rows: Vec<Vec<Price>> = Vec::with_capacity(periods);
    for t in 1..=periods {
        let mut set = BTreeSet::new();
        for s in 1..=periods {
            for v in inst.ranked_row(s).values.iter().filter(|v| !v.is_zero()) {
                for d in &shift[t.abs_diff(s)] {
                    let p = if s <= t { v + d } else { v - d };
                    if !p.is_negative() {
                        set.insert(p);
                    }
                }
            }
        }
        rows.push(set.into_iter().map(Price::Finite).collect());
    }
    if let Some(delta) = refine {
        if !delta.is_positive() {
            return Err(Error::ParameterOutOfRange(format!("grid delta must be positive, got {}", format_rational(delta))));
        }
        let top: Rational = inst.positive_values().iter().sum();
        let steps = (&top / delta).floor().to_integer();
        let steps: u64 = steps
            .try_into()
            .ok()
            .filter(|&n| n <= 1_000_000)
            .ok_or_else(|| Error::ParameterOutOfRange(format!("grid delta {} is too fine", format_rational(delta))))?;
        for row in &mut rows {
            row.extend((0..=steps).map(|k| Price::Finite(delta * Rational::from_integer(k.into()))));
        }
    }
    Ok(PriceGrid::from_candidates(rows))
}
