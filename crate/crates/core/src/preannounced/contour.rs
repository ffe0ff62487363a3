use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{MarketInstance, Price, Rational};

/// A demand item `(rank, period)` viewed as the price line
/// `p_t = value + (t - period) c` it induces at later periods.
///
/// The dummy contour stands for the skip price and sits above every other one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Contour {
    pub value: Rational,
    pub period: usize,
    pub rank: usize,
    pub is_dummy: bool,
}

impl Contour {
    pub fn dummy() -> Self {
        Self { value: Rational::zero(), period: 0, rank: 0, is_dummy: true }
    }

    pub fn new(value: Rational, period: usize, rank: usize) -> Self {
        Self { value, period, rank, is_dummy: false }
    }

    /// Storage-adjusted key `value - c * period`; `None` (infinite) for the dummy.
    pub fn key(&self, c: &Rational) -> Option<Rational> {
        if self.is_dummy {
            None
        } else {
            Some(&self.value - c * Rational::from_integer(self.period.into()))
        }
    }
}

/// Compares keys with the dummy's infinite key on top.
pub(crate) fn cmp_keys(a: &Option<Rational>, b: &Option<Rational>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Price induced at period `t`: `value + (t - period) c`, or skip for the dummy.
pub fn contour_price(contour: &Contour, t: usize, c: &Rational) -> Result<Price> {
    if contour.is_dummy {
        return Ok(Price::Skip);
    }
    if t < contour.period {
        return Err(Error::PeriodBeforeContour { period: t, contour_period: contour.period });
    }
    Ok(Price::Finite(&contour.value + c * Rational::from_integer((t - contour.period).into())))
}

/// `a ⪯ b` iff `key(a) <= key(b)`. Buying on `a`'s line and storing never
/// undercuts `b`'s line, whichever period comes first.
pub fn contour_leq(a: &Contour, b: &Contour, c: &Rational) -> bool {
    cmp_keys(&a.key(c), &b.key(c)) != Ordering::Greater
}

/// Contours of the items of period `t`, one per rank (zero values included).
pub fn contours_of_period(inst: &MarketInstance, t: usize) -> Vec<Contour> {
    inst.ranked_row(t).values.iter().enumerate().map(|(j, v)| Contour::new(v.clone(), t, j + 1)).collect()
}

/// `F_t(incumbent)`: contours of period `t` plus the incumbent, restricted to
/// those not above the incumbent.
pub fn feasible_set(inst: &MarketInstance, t: usize, incumbent: &Contour) -> Result<Vec<Contour>> {
    inst.check_period(t)?;
    if !incumbent.is_dummy && incumbent.period >= t {
        return Err(Error::PeriodBeforeContour { period: t, contour_period: incumbent.period });
    }
    let c = inst.storage().linear_rate().ok_or(Error::ConcaveNotSupported)?;
    let mut out = vec![incumbent.clone()];
    out.extend(contours_of_period(inst, t).into_iter().filter(|g| contour_leq(g, incumbent, c)));
    Ok(out)
}

/// Items of period `t` whose value reaches the contour's price at `t`.
pub fn quantity_at(inst: &MarketInstance, contour: &Contour, t: usize) -> usize {
    let Some(c) = inst.storage().linear_rate() else { return 0 };
    match contour_price(contour, t, c) {
        Ok(Price::Finite(p)) => count_at_least(&inst.ranked_row(t).values, &p),
        _ => 0,
    }
}

/// Items of a decreasing row with value `>= price`.
pub(crate) fn count_at_least(row: &[Rational], price: &Rational) -> usize {
    row.partition_point(|v| v >= price)
}
