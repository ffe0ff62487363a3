//! Optimal preannounced (committed) price schedules under linear storage.

mod contour;
mod dp;
mod fixed;
mod oracle;

pub use contour::{contour_leq, contour_price, contours_of_period, feasible_set, quantity_at, Contour};
pub use dp::{solve_preannounced_dp, DpTables, PreannouncedSolution};
pub use fixed::best_fixed_price;
pub(crate) use fixed::fixed_price_unchecked;
pub use oracle::{
    concave_candidate_grid, enumerate_grid, solve_preannounced_bruteforce, GridEnumeration, ORACLE_MAX_DEMAND,
    ORACLE_MAX_PERIODS,
};
