use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// A posted price, or `Skip`: a price so high that nobody buys.
///
/// `Skip` compares greater than every finite price.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Price {
    Finite(Rational),
    Skip,
}

impl Price {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Price::Finite(p) => Some(p),
            Price::Skip => None,
        }
    }

    pub fn is_skip(&self) -> bool {
        matches!(self, Price::Skip)
    }
}

impl From<Rational> for Price {
    fn from(p: Rational) -> Self {
        Price::Finite(p)
    }
}

impl Ord for Price {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Price::Finite(a), Price::Finite(b)) => a.cmp(b),
            (Price::Finite(_), Price::Skip) => Ordering::Less,
            (Price::Skip, Price::Finite(_)) => Ordering::Greater,
            (Price::Skip, Price::Skip) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Price {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Price::Finite(p) => f.write_str(&format_rational(p)),
            Price::Skip => f.write_str("skip"),
        }
    }
}

impl FromStr for Price {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("skip") {
            Ok(Price::Skip)
        } else {
            parse_rational(s).map(Price::Finite)
        }
    }
}

/// One price per period, `prices[t - 1]` for period `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriceSchedule {
    prices: Vec<Price>,
}

impl PriceSchedule {
    pub fn new(prices: Vec<Price>) -> Self {
        Self { prices }
    }

    pub fn all_skip(periods: usize) -> Self {
        Self { prices: vec![Price::Skip; periods] }
    }

    pub fn from_finite(prices: impl IntoIterator<Item = Rational>) -> Self {
        Self { prices: prices.into_iter().map(Price::Finite).collect() }
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Price at 1-based period `t`.
    pub fn at(&self, t: usize) -> &Price {
        &self.prices[t - 1]
    }

    pub fn prices(&self) -> &[Price] {
        &self.prices
    }

    pub fn check_len(&self, periods: usize) -> Result<()> {
        if self.prices.len() != periods {
            return Err(Error::DimensionMismatch(format!(
                "schedule has {} prices, instance has {} periods",
                self.prices.len(),
                periods
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PriceSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.prices.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}
