//! Instances shared by the benchmarks.

use pricing_lab_core::generators::{gen_random, RandomSpec};
use pricing_lab_core::model::rat;
use pricing_lab_core::MarketInstance;

/// Random multi-buyer instance with values up to 100 and `c` in `{0, 1, 2}`.
pub fn random_instance(periods: usize, buyers: usize, seed: u64) -> MarketInstance {
    gen_random(&RandomSpec::new(seed, periods, buyers, 100, vec![rat(0), rat(1), rat(2)])).expect("valid parameters")
}
