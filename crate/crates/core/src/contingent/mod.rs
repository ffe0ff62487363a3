//! Contingent pricing: the retailer announces each price after seeing the
//! state of play.
//!
//! Equilibria are computed on finite price grids (grid-SPNE). A single buyer
//! is solved exactly by backward induction; for several buyers, supplied
//! strategy profiles are simulated and certified by one-shot deviation checks.

mod bounds;
mod certify;
mod grid;
mod profile;
mod simulate;
mod single_buyer;

pub use bounds::{discrimination_upper_bound, DiscriminationBound};
pub use certify::{certify_spne, BuyerDeviation, CertificationReport, CertifyOptions, RetailerDeviation};
pub use grid::{build_price_grid, PriceGrid};
pub use profile::{
    feasible_actions, BuyerAction, BuyerState, BuyerStrategy, GameState, RetailerStrategy, StrategyProfile, BUILTIN_PROFILES,
};
pub use simulate::{play_from, simulate_profile, Payoffs, SimulationResult};
pub use single_buyer::{solve_spne_single_buyer, SpneSolution};
