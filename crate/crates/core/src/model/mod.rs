//! Market model shared by every solver: exact rationals, instances,
//! price schedules and the JSON file format.

mod instance;
pub mod io;
mod rational;
mod schedule;

pub use instance::{demand_size, ranked_values, DemandSide, MarketInstance, RankedRow, StorageCost};
pub use rational::{format_rational, harmonic, parse_rational, rat, ratio, to_f64, Rational};
pub use schedule::{Price, PriceSchedule};
