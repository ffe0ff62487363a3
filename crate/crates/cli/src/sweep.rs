//! Revenue-gap sweeps over the log-gap and harmonic families.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context};
use pricing_lab_core::contingent::{build_price_grid, discrimination_upper_bound, simulate_profile, solve_spne_single_buyer, StrategyProfile};
use pricing_lab_core::generators::{gen_harmonic, gen_loggap};
use pricing_lab_core::model::to_f64;
use pricing_lab_core::preannounced::{best_fixed_price, solve_preannounced_dp};
use pricing_lab_core::{format_rational, MarketInstance, Rational};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "PRICING_LAB_THREADS";
pub const CSV_HEADER: [&str; 12] = ["family", "param", "N", "T", "pa", "cp", "fixed", "ratio", "bound", "ms", "ratio_f64", "bound_f64"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    LogGap,
    Harmonic,
}

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "loggap" => Ok(Family::LogGap),
            "harmonic" => Ok(Family::Harmonic),
            other => bail!("unknown sweep family `{other}` (expected loggap or harmonic)"),
        }
    }
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::LogGap => "loggap",
            Family::Harmonic => "harmonic",
        }
    }
}

/// One instance of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub family: Family,
    pub param: u32,
    /// Buyers (log-gap) or units demanded by the single buyer (harmonic).
    pub buyers: usize,
    pub periods: usize,
    pub pa: Rational,
    pub cp: Rational,
    pub fixed: Rational,
    /// `cp / pa`; `None` when `pa` is zero.
    pub ratio: Option<Rational>,
    pub bound: Rational,
    pub sum_values: Rational,
    pub ms: u128,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Harmonic premium on the first unit.
    pub epsilon: Rational,
    /// Report 0 ms so output is reproducible byte for byte.
    pub no_timing: bool,
}

/// Parses `a..b` (inclusive) or a comma-separated list.
pub fn parse_params(text: &str) -> anyhow::Result<Vec<u32>> {
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (u32, u32) = (a.trim().parse().context("range start")?, b.trim().parse().context("range end")?);
        if a > b {
            bail!("empty range {text}");
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|p| p.trim().parse::<u32>().with_context(|| format!("bad parameter `{p}`"))).collect()
}

/// Rayon pool capped by `PRICING_LAB_THREADS` when set.
pub fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
        if n == 0 {
            bail!("{THREADS_ENV} must be positive");
        }
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

/// Solves every instance of the range concurrently; rows come back in
/// parameter order.
pub fn ratio_sweep(family: Family, params: &[u32], options: &SweepOptions) -> anyhow::Result<Vec<SweepRow>> {
    thread_pool()?.install(|| params.par_iter().map(|&p| sweep_one(family, p, options)).collect())
}

fn sweep_one(family: Family, param: u32, options: &SweepOptions) -> anyhow::Result<SweepRow> {
    let start = Instant::now();
    let inst: MarketInstance = match family {
        Family::LogGap => gen_loggap(param)?,
        Family::Harmonic => gen_harmonic(param as usize, &options.epsilon)?,
    };
    let pa = solve_preannounced_dp(&inst)?.revenue;
    let cp = match family {
        Family::LogGap => simulate_profile(&inst, &StrategyProfile::builtin("pacman", &inst)?)?.revenue,
        Family::Harmonic => {
            let n = Rational::from_integer(param.into());
            let delta = (&n * &n).recip();
            solve_spne_single_buyer(&inst, &build_price_grid(&inst, Some(&delta))?)?.revenue
        }
    };
    let (_, fixed) = best_fixed_price(&inst)?;
    let bound = discrimination_upper_bound(&inst)?;
    let ratio = (pa != Rational::default()).then(|| &cp / &pa);
    let ms = if options.no_timing { 0 } else { start.elapsed().as_millis() };
    Ok(SweepRow {
        family,
        param,
        buyers: if inst.is_single_buyer() { inst.ranks() } else { inst.buyers() },
        periods: inst.periods(),
        pa,
        cp,
        fixed,
        ratio,
        bound: bound.bound,
        sum_values: bound.sum_values,
        ms,
    })
}

/// Writes rows as CSV: exact rationals, then decimal approximations.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.family.name().to_string(),
            r.param.to_string(),
            r.buyers.to_string(),
            r.periods.to_string(),
            format_rational(&r.pa),
            format_rational(&r.cp),
            format_rational(&r.fixed),
            r.ratio.as_ref().map(format_rational).unwrap_or_default(),
            format_rational(&r.bound),
            r.ms.to_string(),
            r.ratio.as_ref().map(|x| format!("{:.6}", to_f64(x))).unwrap_or_default(),
            format!("{:.6}", to_f64(&r.bound)),
        ])?;
    }
    w.flush()?;
    Ok(())
}
