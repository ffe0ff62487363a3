//! Command-line front end for `pricing-lab-core` and the experiment sweeps.

pub mod app;
pub mod sweep;
