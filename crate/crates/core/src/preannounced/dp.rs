use std::cmp::Ordering;

use num_traits::Zero;

use super::contour::{cmp_keys, count_at_least, Contour};
use crate::error::{Error, Result};
use crate::model::{MarketInstance, Price, PriceSchedule, Rational};

/// Revenue-to-go and successor tables of the contour program.
///
/// Incumbents of period `t` are the dummy and every contour of an earlier
/// period; `R(T + 1, .)` is identically zero and not stored.
#[derive(Clone, Debug)]
pub struct DpTables {
    periods: usize,
    ranks: usize,
    contours: Vec<Contour>,
    revenue: Vec<Vec<Rational>>,
    successor: Vec<Vec<usize>>,
}

impl DpTables {
    fn id(&self, contour: &Contour) -> Option<usize> {
        if contour.is_dummy {
            return Some(0);
        }
        if contour.period == 0 || contour.period > self.periods || contour.rank == 0 || contour.rank > self.ranks {
            return None;
        }
        let id = 1 + (contour.period - 1) * self.ranks + (contour.rank - 1);
        (self.contours[id] == *contour).then_some(id)
    }

    /// `R(t, incumbent)`; `None` if the contour is not an incumbent of `t`.
    pub fn revenue_to_go(&self, t: usize, incumbent: &Contour) -> Option<Rational> {
        if t == self.periods + 1 {
            return self.id(incumbent).map(|_| Rational::zero());
        }
        let id = self.id(incumbent)?;
        self.revenue.get(t.checked_sub(1)?)?.get(id).cloned()
    }

    /// `S(t, incumbent)`: the contour the program moves to at period `t`.
    pub fn successor(&self, t: usize, incumbent: &Contour) -> Option<&Contour> {
        let id = self.id(incumbent)?;
        let next = *self.successor.get(t.checked_sub(1)?)?.get(id)?;
        Some(&self.contours[next])
    }

    /// Number of incumbents at period `t`.
    pub fn incumbents(&self, t: usize) -> usize {
        1 + (t - 1) * self.ranks
    }

    /// Incumbent contours of period `t`, dummy first.
    pub fn incumbent_contours(&self, t: usize) -> &[Contour] {
        &self.contours[..self.incumbents(t)]
    }
}

#[derive(Clone, Debug)]
pub struct PreannouncedSolution {
    pub schedule: PriceSchedule,
    pub revenue: Rational,
    /// Contour selected at each period (the dummy where nothing is offered).
    pub path: Vec<Contour>,
    pub tables: DpTables,
}

/// Revenue first, then the larger key, the later period and the smaller rank.
fn beats(contours: &[Contour], keys: &[Option<Rational>], a: (usize, &Rational), b: (usize, &Rational)) -> bool {
    let (ga, gb) = (&contours[a.0], &contours[b.0]);
    a.1.cmp(b.1)
        .then_with(|| cmp_keys(&keys[a.0], &keys[b.0]))
        .then_with(|| ga.period.cmp(&gb.period))
        .then_with(|| gb.rank.cmp(&ga.rank))
        == Ordering::Greater
}

/// Optimal preannounced schedule under linear storage cost.
///
/// Backward recursion over `(t, incumbent)`:
/// `R(t, g) = max_{g' in F_t(g)} q_t(g') p_t(g') + R(t + 1, g')`.
/// Candidates of each period are sorted by key so every feasible set is the
/// incumbent plus a prefix; a prefix maximum answers each node in `O(log N)`.
/// Periods where the chosen contour sells nothing are emitted as skip.
pub fn solve_preannounced_dp(inst: &MarketInstance) -> Result<PreannouncedSolution> {
    let c = inst.storage().linear_rate().ok_or(Error::ConcaveNotSupported)?.clone();
    let periods = inst.periods();
    let ranks = inst.ranks();

    let mut contours = vec![Contour::dummy()];
    for t in 1..=periods {
        contours.extend(super::contour::contours_of_period(inst, t));
    }
    let keys: Vec<Option<Rational>> = contours.iter().map(|g| g.key(&c)).collect();
    let period_rat: Vec<Rational> = (0..=periods).map(|t| Rational::from_integer(t.into())).collect();

    // sales revenue q_t(g) p_t(g) of a non-dummy contour at t
    let sales = |id: usize, t: usize| -> Rational {
        let g = &contours[id];
        let price = &g.value + &c * (&period_rat[t] - &period_rat[g.period]);
        let q = count_at_least(&inst.ranked_row(t).values, &price);
        if q == 0 {
            Rational::zero()
        } else {
            price * Rational::from_integer(q.into())
        }
    };

    let mut revenue: Vec<Vec<Rational>> = vec![Vec::new(); periods];
    let mut successor: Vec<Vec<usize>> = vec![Vec::new(); periods];
    let mut next_r: Vec<Rational> = vec![Rational::zero(); contours.len()];

    for t in (1..=periods).rev() {
        let first = 1 + (t - 1) * ranks;
        let mut order: Vec<usize> = (first..first + ranks).collect();
        order.sort_by(|&a, &b| cmp_keys(&keys[a], &keys[b]));
        let sorted_keys: Vec<&Option<Rational>> = order.iter().map(|&id| &keys[id]).collect();

        // prefix_best[k]: best option among the k smallest-key candidates
        let mut prefix_best: Vec<Option<(usize, Rational)>> = Vec::with_capacity(ranks + 1);
        prefix_best.push(None);
        for &id in &order {
            let value = sales(id, t) + &next_r[id];
            let entry = match prefix_best.last().cloned().flatten() {
                Some((old, old_value)) if !beats(&contours, &keys, (id, &value), (old, &old_value)) => {
                    Some((old, old_value))
                }
                _ => Some((id, value)),
            };
            prefix_best.push(entry);
        }

        let incumbents = first;
        let mut r_t = Vec::with_capacity(incumbents);
        let mut s_t = Vec::with_capacity(incumbents);
        for id in 0..incumbents {
            let stay = if id == 0 { next_r[0].clone() } else { sales(id, t) + &next_r[id] };
            let k = sorted_keys.partition_point(|key| cmp_keys(key, &keys[id]) != Ordering::Greater);
            let (chosen, value) = match &prefix_best[k] {
                Some((best, best_value)) if beats(&contours, &keys, (*best, best_value), (id, &stay)) => {
                    (*best, best_value.clone())
                }
                _ => (id, stay),
            };
            r_t.push(value);
            s_t.push(chosen);
        }
        revenue[t - 1] = r_t;
        successor[t - 1] = s_t;
        next_r = revenue[t - 1].clone();
    }

    let mut prices = Vec::with_capacity(periods);
    let mut path = Vec::with_capacity(periods);
    let mut current = 0usize;
    for t in 1..=periods {
        current = successor[t - 1][current];
        let g = &contours[current];
        let price = if g.is_dummy {
            Price::Skip
        } else {
            let p = &g.value + &c * (&period_rat[t] - &period_rat[g.period]);
            if count_at_least(&inst.ranked_row(t).values, &p) == 0 {
                Price::Skip
            } else {
                Price::Finite(p)
            }
        };
        prices.push(price);
        path.push(g.clone());
    }
    let total = revenue[0][0].clone();
    Ok(PreannouncedSolution {
        schedule: PriceSchedule::new(prices),
        revenue: total,
        path,
        tables: DpTables { periods, ranks, contours, revenue, successor },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_harmonic, gen_loggap, gen_table1};
    use crate::model::{rat, ratio, StorageCost};
    use crate::response::best_response_linear;

    #[test]
    fn table1() {
        let sol = solve_preannounced_dp(&gen_table1()).unwrap();
        assert_eq!(sol.schedule, PriceSchedule::from_finite([rat(17), rat(15)]));
        assert_eq!(sol.revenue, rat(32));
        assert_eq!(sol.tables.revenue_to_go(1, &Contour::dummy()), Some(rat(32)));
        assert_eq!(sol.tables.revenue_to_go(3, &Contour::dummy()), Some(rat(0)));
        assert_eq!(sol.tables.successor(1, &Contour::dummy()), Some(&Contour::new(rat(17), 1, 1)));
        // from the 10-contour only 10+c and 4 remain: 11 sells one unit
        assert_eq!(sol.tables.revenue_to_go(2, &Contour::new(rat(10), 1, 2)), Some(rat(11)));
    }

    #[test]
    fn loggap_and_harmonic() {
        assert_eq!(solve_preannounced_dp(&gen_loggap(3).unwrap()).unwrap().revenue, rat(7));
        let sol = solve_preannounced_dp(&gen_harmonic(4, &ratio(1, 8)).unwrap()).unwrap();
        assert_eq!(sol.revenue, ratio(9, 8));
        assert_eq!(sol.schedule.at(1), &Price::Skip);
        assert_eq!(sol.schedule.at(2), &Price::Finite(ratio(9, 8)));
    }

    #[test]
    fn revenue_matches_best_response() {
        let inst = gen_table1();
        let sol = solve_preannounced_dp(&inst).unwrap();
        assert_eq!(best_response_linear(&inst, &sol.schedule).unwrap().revenue, sol.revenue);
    }

    #[test]
    fn concave_rejected() {
        let inst = crate::generators::gen_concave_cx(1, 1, &ratio(1, 16)).unwrap();
        assert!(matches!(solve_preannounced_dp(&inst), Err(Error::ConcaveNotSupported)));
    }

    #[test]
    fn all_zero_values_skip_everywhere() {
        let inst = MarketInstance::new(
            2,
            StorageCost::Linear { c: rat(1) },
            crate::DemandSide::MultiBuyer { values: vec![vec![rat(0), rat(0)]] },
        )
        .unwrap();
        let sol = solve_preannounced_dp(&inst).unwrap();
        assert_eq!(sol.revenue, rat(0));
        assert_eq!(sol.schedule, PriceSchedule::all_skip(2));
    }
}
