//! Dynamic monopoly pricing of indivisible storable goods.
//!
//! The crate is organised around a shared market model ([`model`]) and the
//! solvers built on top of it:
//!
//! - [`response`]: exact buyer best responses to a fixed price schedule under
//!   linear and concave storage costs, plus an independent plan auditor.
//! - [`preannounced`]: the contour dynamic program for optimal committed
//!   schedules, an exhaustive oracle and the best fixed price.
//! - [`contingent`]: history-dependent pricing: grid backward induction for a
//!   single buyer, strategy-profile simulation and subgame-perfection
//!   certification by one-shot deviation checks.
//! - [`generators`]: the named instance families and seeded random instances.
//!
//! All money quantities are exact rationals; ties are decided exactly.

pub mod contingent;
pub mod error;
pub mod generators;
pub mod model;
pub mod preannounced;
pub mod response;

pub use error::{Error, Result};
pub use model::{
    demand_size, format_rational, harmonic, parse_rational, ranked_values, DemandSide,
    MarketInstance, Price, PriceSchedule, RankedRow, Rational, StorageCost,
};
pub use response::{ConsumerPlan, MarketOutcome};
