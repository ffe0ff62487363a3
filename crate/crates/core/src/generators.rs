//! Constructors for the named instance families and seeded random instances.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{rat, ratio, DemandSide, MarketInstance, Rational, StorageCost};

/// A named family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Table1,
    Harmonic { n: usize, epsilon: Rational },
    LogGap { blocks: u32 },
    ConcaveCx { n1: usize, n2: usize, epsilon: Rational },
    Random(RandomSpec),
}

impl FamilySpec {
    pub fn generate(&self) -> Result<MarketInstance> {
        match self {
            FamilySpec::Table1 => Ok(gen_table1()),
            FamilySpec::Harmonic { n, epsilon } => gen_harmonic(*n, epsilon),
            FamilySpec::LogGap { blocks } => gen_loggap(*blocks),
            FamilySpec::ConcaveCx { n1, n2, epsilon } => gen_concave_cx(*n1, *n2, epsilon),
            FamilySpec::Random(spec) => gen_random(spec),
        }
    }
}

/// Two periods, storage cost 1, two buyers valued (17, 15) and (10, 4).
pub fn gen_table1() -> MarketInstance {
    MarketInstance::new(
        2,
        StorageCost::Linear { c: rat(1) },
        DemandSide::MultiBuyer { values: vec![vec![rat(17), rat(15)], vec![rat(10), rat(4)]] },
    )
    .expect("table 1 is valid")
}

/// Single buyer, two periods, free storage. Nothing is wanted in period 1; in
/// period 2 the marginals are `1 + eps, 1/2, 1/3, ..., 1/n`.
pub fn gen_harmonic(n: usize, epsilon: &Rational) -> Result<MarketInstance> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("harmonic family needs n >= 2, got {n}")));
    }
    if *epsilon < Rational::zero() {
        return Err(Error::ParameterOutOfRange("epsilon must be nonnegative".into()));
    }
    let marginals = (1..=n)
        .map(|i| {
            let second = if i == 1 { Rational::one() + epsilon } else { ratio(1, i as i64) };
            vec![Rational::zero(), second]
        })
        .collect();
    MarketInstance::new(2, StorageCost::Linear { c: rat(0) }, DemandSide::SingleBuyer { marginals })
}

/// `2^n - 1` periods split into blocks of `2^(n-1), 2^(n-2), ..., 1` periods.
/// Every period has its own consumer; a consumer in block `k` values the good
/// at `2^(k-1)` in her period only. Storage is free.
pub fn gen_loggap(n: u32) -> Result<MarketInstance> {
    if !(1..=20).contains(&n) {
        return Err(Error::ParameterOutOfRange(format!("log-gap family needs 1 <= n <= 20, got {n}")));
    }
    let periods = (1usize << n) - 1;
    let mut per_period = Vec::with_capacity(periods);
    for k in 1..=n {
        let len = 1usize << (n - k);
        per_period.extend(std::iter::repeat_n(rat(1i64 << (k - 1)), len));
    }
    let values = (0..periods)
        .map(|i| (0..periods).map(|t| if t == i { per_period[t].clone() } else { Rational::zero() }).collect())
        .collect();
    MarketInstance::new(periods, StorageCost::Linear { c: rat(0) }, DemandSide::MultiBuyer { values })
}

/// Three periods with concave storage `C(1) = 3/2`, `C(2) = 3/2 + eps`;
/// `n1` buyers valued (1, 0, 0), `n2` buyers valued (0, 0, 4) and one buyer
/// valued (0, 11/4, 3).
pub fn gen_concave_cx(n1: usize, n2: usize, epsilon: &Rational) -> Result<MarketInstance> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::ParameterOutOfRange("n1 and n2 must be positive".into()));
    }
    if *epsilon <= Rational::zero() || *epsilon >= ratio(1, 4) {
        return Err(Error::ParameterOutOfRange("epsilon must lie in (0, 1/4)".into()));
    }
    let mut values = Vec::with_capacity(n1 + n2 + 1);
    values.extend(std::iter::repeat_n(vec![rat(1), rat(0), rat(0)], n1));
    values.extend(std::iter::repeat_n(vec![rat(0), rat(0), rat(4)], n2));
    values.push(vec![rat(0), ratio(11, 4), rat(3)]);
    let cum = vec![rat(0), ratio(3, 2), ratio(3, 2) + epsilon];
    MarketInstance::new(3, StorageCost::ConcaveTable { cum }, DemandSide::MultiBuyer { values })
}

/// Shape of a random instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RandomKind {
    /// `buyers` unit-demand buyers, linear storage cost drawn from `c_choices`.
    #[default]
    MultiLinear,
    /// One buyer with up to `buyers` units per period, linear storage.
    SingleLinear,
    /// One buyer with up to `buyers` units per period; a concave table whose
    /// marginals are drawn (then sorted decreasing) from `c_choices`.
    SingleConcave,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub periods: usize,
    pub buyers: usize,
    pub value_max: u32,
    pub c_choices: Vec<Rational>,
    pub kind: RandomKind,
}

impl RandomSpec {
    pub fn new(seed: u64, periods: usize, buyers: usize, value_max: u32, c_choices: Vec<Rational>) -> Self {
        Self { seed, periods, buyers, value_max, c_choices, kind: RandomKind::MultiLinear }
    }

    pub fn with_kind(mut self, kind: RandomKind) -> Self {
        self.kind = kind;
        self
    }
}

/// Deterministic in the seed: integer values uniform in `0..=value_max`.
pub fn gen_random(spec: &RandomSpec) -> Result<MarketInstance> {
    if spec.periods == 0 || spec.buyers == 0 || spec.c_choices.is_empty() {
        return Err(Error::ParameterOutOfRange("random instances need periods, buyers and cost choices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let draw_matrix = |rng: &mut ChaCha8Rng| -> Vec<Vec<Rational>> {
        (0..spec.buyers)
            .map(|_| (0..spec.periods).map(|_| rat(rng.random_range(0..=spec.value_max) as i64)).collect())
            .collect()
    };
    let pick = |rng: &mut ChaCha8Rng| spec.c_choices[rng.random_range(0..spec.c_choices.len())].clone();
    match spec.kind {
        RandomKind::MultiLinear => {
            let values = draw_matrix(&mut rng);
            let c = pick(&mut rng);
            MarketInstance::new(spec.periods, StorageCost::Linear { c }, DemandSide::MultiBuyer { values })
        }
        RandomKind::SingleLinear | RandomKind::SingleConcave => {
            let mut marginals = draw_matrix(&mut rng);
            for t in 0..spec.periods {
                let mut column: Vec<Rational> = marginals.iter().map(|row| row[t].clone()).collect();
                column.sort_by(|a, b| b.cmp(a));
                for (row, v) in marginals.iter_mut().zip(column) {
                    row[t] = v;
                }
            }
            let storage = if spec.kind == RandomKind::SingleLinear {
                StorageCost::Linear { c: pick(&mut rng) }
            } else {
                let mut steps: Vec<Rational> = (0..spec.buyers.max(2)).map(|_| pick(&mut rng)).collect();
                steps.sort_by(|a, b| b.cmp(a));
                let mut cum = vec![Rational::zero()];
                for m in steps {
                    let last = cum.last().unwrap().clone();
                    cum.push(last + m);
                }
                StorageCost::ConcaveTable { cum }
            };
            MarketInstance::new(spec.periods, storage, DemandSide::SingleBuyer { marginals })
        }
    }
}

/// Seeded corpus of small linear instances: `T <= 4`, up to 3 buyers (or 3
/// units for a single buyer, every fifth instance), integer values `<= 8`,
/// `c` in `{0, 1, 2}`. Instance `k` uses seed `k`.
pub fn small_random_corpus(count: u64) -> Vec<MarketInstance> {
    (0..count)
        .map(|seed| {
            let periods = 1 + (seed % 4) as usize;
            let buyers = 1 + ((seed / 4) % 3) as usize;
            let spec = RandomSpec::new(seed, periods, buyers, 8, vec![rat(0), rat(1), rat(2)]);
            let spec = if seed % 5 == 4 { spec.with_kind(RandomKind::SingleLinear) } else { spec };
            gen_random(&spec).expect("corpus parameters are valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{demand_size, harmonic};

    #[test]
    fn table1_values() {
        let inst = gen_table1();
        let DemandSide::MultiBuyer { values } = inst.demand() else { panic!() };
        assert_eq!(values[0][0], rat(17));
        assert_eq!(values[1][1], rat(4));
        assert_eq!(demand_size(&inst), 4);
    }

    #[test]
    fn harmonic_marginals() {
        let inst = gen_harmonic(3, &ratio(1, 8)).unwrap();
        assert_eq!(inst.units(0, 2), &[ratio(9, 8), ratio(1, 2), ratio(1, 3)]);
        assert!(inst.units(0, 1).is_empty());
        let inst = gen_harmonic(4, &rat(0)).unwrap();
        assert_eq!(inst.units(0, 2).iter().sum::<Rational>(), harmonic(4));
        assert!(gen_harmonic(1, &rat(0)).is_err());
    }

    #[test]
    fn loggap_layout() {
        let per_period = |n| {
            let inst = gen_loggap(n).unwrap();
            (1..=inst.periods()).map(|t| inst.ranked_row(t).values[0].clone()).collect::<Vec<_>>()
        };
        assert_eq!(per_period(2), vec![rat(1), rat(1), rat(2)]);
        assert_eq!(per_period(3), [1, 1, 1, 1, 2, 2, 4].map(rat).to_vec());
        let one = gen_loggap(1).unwrap();
        assert_eq!((one.periods(), one.buyers()), (1, 1));
        assert_eq!(demand_size(&gen_loggap(2).unwrap()), 3);
    }

    #[test]
    fn concave_counterexample_shape() {
        let inst = gen_concave_cx(5, 5, &ratio(1, 16)).unwrap();
        assert_eq!((inst.buyers(), inst.periods()), (11, 3));
        let small = gen_concave_cx(1, 1, &ratio(1, 16)).unwrap();
        assert_eq!(small.storage().cost(2), ratio(25, 16));
        assert!(gen_concave_cx(1, 1, &ratio(1, 4)).is_err());
        assert!(gen_concave_cx(0, 1, &ratio(1, 16)).is_err());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let spec = RandomSpec::new(1, 4, 3, 8, vec![rat(0), rat(1), rat(2)]);
        assert_eq!(gen_random(&spec).unwrap(), gen_random(&spec).unwrap());
        let inst = gen_random(&spec).unwrap();
        assert!(inst.positive_values().iter().all(|v| *v <= rat(8)));
        for seed in 0..500 {
            let spec = RandomSpec { seed, ..spec.clone() };
            gen_random(&spec).unwrap();
            gen_random(&spec.clone().with_kind(RandomKind::SingleConcave)).unwrap();
        }
    }
}
