use super::{ConsumerPlan, MarketOutcome, TieBreak};
use crate::error::{Error, Result};
use crate::model::{MarketInstance, Price, PriceSchedule, Rational};

/// Cheapest way to hold one unit at period `t`: `min_{s <= t} p_s + (t - s) c`.
///
/// Returns the price and the source period; among equally cheap sources the
/// latest one (least storage) is reported.
pub fn effective_price(schedule: &PriceSchedule, c: &Rational, t: usize) -> Result<(Price, usize)> {
    if t == 0 || t > schedule.len() {
        return Err(Error::PeriodOutOfRange { period: t, periods: schedule.len() });
    }
    Ok(effective_prices(schedule, c).swap_remove(t - 1))
}

/// Effective price and source for every period, in one forward pass.
pub(crate) fn effective_prices(schedule: &PriceSchedule, c: &Rational) -> Vec<(Price, usize)> {
    let mut out: Vec<(Price, usize)> = Vec::with_capacity(schedule.len());
    for (i, p) in schedule.prices().iter().enumerate() {
        let t = i + 1;
        let carried = match out.last() {
            Some((Price::Finite(e), s)) => Some((Price::Finite(e + c), *s)),
            _ => None,
        };
        let entry = match carried {
            Some((carried_price, s)) if carried_price < *p => (carried_price, s),
            _ => (p.clone(), t),
        };
        // a skipped current period with nothing to carry stays skipped at t
        out.push(entry);
    }
    out
}

pub fn best_response_linear(inst: &MarketInstance, schedule: &PriceSchedule) -> Result<MarketOutcome> {
    best_response_linear_with(inst, schedule, TieBreak::Buy)
}

/// Linear storage costs make demand items independent: item `(i, t)` is bought
/// iff its value reaches the effective price `e_t`, from the latest cheapest source.
pub fn best_response_linear_with(inst: &MarketInstance, schedule: &PriceSchedule, tie: TieBreak) -> Result<MarketOutcome> {
    let c = inst.storage().linear_rate().ok_or(Error::ConcaveNotSupported)?;
    schedule.check_len(inst.periods())?;
    let effective = effective_prices(schedule, c);
    let periods = inst.periods();
    let plans = (0..inst.buyers())
        .map(|buyer| {
            let mut purchases = vec![0u32; periods];
            let mut consumption = vec![0u32; periods];
            for t in 1..=periods {
                let (price, source) = &effective[t - 1];
                let Price::Finite(e) = price else { continue };
                let wanted = inst
                    .units(buyer, t)
                    .iter()
                    .take_while(|v| match tie {
                        TieBreak::Buy => *v >= e,
                        TieBreak::Abstain => *v > e,
                    })
                    .count() as u32;
                purchases[source - 1] += wanted;
                consumption[t - 1] += wanted;
            }
            ConsumerPlan::from_flows(purchases, consumption)
        })
        .collect();
    MarketOutcome::evaluate(inst, schedule, plans)
}
