//! Command-line interface.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pricing_lab_core::contingent::{
    build_price_grid, certify_spne, discrimination_upper_bound, simulate_profile, solve_spne_single_buyer, CertificationReport,
    CertifyOptions, StrategyProfile,
};
use pricing_lab_core::generators::{gen_concave_cx, gen_harmonic, gen_loggap, gen_random, gen_table1, RandomKind, RandomSpec};
use pricing_lab_core::model::io::{read_instance, schedule_from_json, schedule_to_json, instance_to_json};
use pricing_lab_core::preannounced::{solve_preannounced_bruteforce, solve_preannounced_dp};
use pricing_lab_core::response::best_response;
use pricing_lab_core::{format_rational, parse_rational, MarketInstance, Price, PriceSchedule, Rational};
use serde_json::{json, Value};

use crate::sweep::{parse_params, ratio_sweep, write_csv, Family, SweepOptions};

#[derive(Debug, Parser)]
#[command(name = "pricing-lab", version, about = "Dynamic monopoly pricing of storable goods")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named or random instance as JSON.
    Generate {
        #[command(subcommand)]
        family: GenerateFamily,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Solve for optimal prices.
    Solve {
        #[command(subcommand)]
        mode: SolveMode,
    },
    /// Best response of the buyers to a price schedule.
    Respond {
        #[command(flatten)]
        input: InstanceArg,
        /// Schedule JSON file (as written by `solve pre`).
        #[arg(long, conflicts_with = "prices")]
        schedule: Option<PathBuf>,
        /// Comma-separated prices, `skip` for no offer.
        #[arg(long)]
        prices: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play a strategy profile forward.
    Simulate {
        #[command(flatten)]
        input: InstanceArg,
        /// `builtin:<name>`: table1-threat, table1-unconditional or pacman.
        #[arg(long)]
        profile: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a strategy profile for profitable one-shot deviations.
    Certify {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        profile: String,
        /// Add every multiple of this step to the price grid.
        #[arg(long, value_parser = parse_rational_arg)]
        grid_delta: Option<Rational>,
        #[arg(long, default_value_t = 2)]
        inventory_cap: u32,
        #[arg(long, default_value_t = 2_000_000)]
        max_states: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perfect-discrimination revenue and the harmonic fixed-price bound.
    Bounds {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preannounced vs contingent revenue over a family.
    Sweep {
        #[arg(long)]
        family: Family,
        /// Range `a..b` or list `a,b,c`.
        #[arg(long = "n")]
        params: String,
        #[arg(long, value_parser = parse_rational_arg, default_value = "0")]
        epsilon: Rational,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Report 0 ms in the timing column.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum SolveMode {
    /// Optimal preannounced schedule (linear storage).
    Pre {
        #[command(flatten)]
        input: InstanceArg,
        /// Use exhaustive search instead of the dynamic program.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid subgame-perfect equilibrium of the single-buyer contingent game.
    Cp {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, value_parser = parse_rational_arg)]
        grid_delta: Option<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenerateFamily {
    Table1,
    Harmonic {
        #[arg(long = "n")]
        n: usize,
        #[arg(long, value_parser = parse_rational_arg, default_value = "0")]
        epsilon: Rational,
    },
    Loggap {
        #[arg(long = "n")]
        n: u32,
    },
    ConcaveCx {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, value_parser = parse_rational_arg, default_value = "1/16")]
        epsilon: Rational,
    },
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        periods: usize,
        /// Buyers, or units per period for single-buyer kinds.
        #[arg(long, default_value_t = 3)]
        buyers: usize,
        #[arg(long, default_value_t = 8)]
        value_max: u32,
        /// Comma-separated storage cost choices.
        #[arg(long, default_value = "0,1,2")]
        c: String,
        #[arg(long, value_enum, default_value_t = KindArg::Multi)]
        kind: KindArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Multi,
    Single,
    SingleConcave,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load(input: &InstanceArg) -> anyhow::Result<MarketInstance> {
    read_instance(&input.instance).with_context(|| format!("reading instance {}", input.instance.display()))
}

fn profile_named(spec: &str, inst: &MarketInstance) -> anyhow::Result<StrategyProfile> {
    let Some(name) = spec.strip_prefix("builtin:") else {
        bail!("profile must be `builtin:<name>`, got `{spec}`");
    };
    Ok(StrategyProfile::builtin(name, inst)?)
}

fn price_list(prices: &[Price]) -> Vec<String> {
    prices.iter().map(Price::to_string).collect()
}

fn report_json(r: &CertificationReport) -> Value {
    let retailer = r.worst_retailer.as_ref().map(|d| {
        json!({"state": d.state.to_string(), "price": d.price.to_string(), "gain": format_rational(&d.gain)})
    });
    let buyer = |d: &pricing_lab_core::contingent::BuyerDeviation| {
        json!({
            "buyer": d.buyer,
            "state": d.state.to_string(),
            "price": d.price.to_string(),
            "buy": d.action.buy,
            "consume": d.action.consume,
            "gain": format_rational(&d.gain),
        })
    };
    json!({
        "certified": r.certified,
        "on_path_revenue": format_rational(&r.on_path_revenue),
        "consumer_surplus": format_rational(&r.consumer_surplus),
        "states_examined": r.states_examined,
        "grid": r.grid.rows().iter().map(|row| price_list(row)).collect::<Vec<_>>(),
        "worst_retailer_deviation": retailer,
        "worst_buyer_deviation": r.worst_buyer.as_ref().map(buyer),
        "worst_on_path_buyer_deviation": r.worst_on_path_buyer.as_ref().map(buyer),
    })
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { family, out } => {
            let inst = match family {
                GenerateFamily::Table1 => gen_table1(),
                GenerateFamily::Harmonic { n, epsilon } => gen_harmonic(n, &epsilon)?,
                GenerateFamily::Loggap { n } => gen_loggap(n)?,
                GenerateFamily::ConcaveCx { n1, n2, epsilon } => gen_concave_cx(n1, n2, &epsilon)?,
                GenerateFamily::Random { seed, periods, buyers, value_max, c, kind } => {
                    let choices = c.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>, _>>()?;
                    let kind = match kind {
                        KindArg::Multi => RandomKind::MultiLinear,
                        KindArg::Single => RandomKind::SingleLinear,
                        KindArg::SingleConcave => RandomKind::SingleConcave,
                    };
                    gen_random(&RandomSpec::new(seed, periods, buyers, value_max, choices).with_kind(kind))?
                }
            };
            emit(&instance_to_json(&inst), out.as_deref())
        }
        Command::Solve { mode: SolveMode::Pre { input, oracle, out } } => {
            let inst = load(&input)?;
            let (schedule, revenue) = if oracle {
                solve_preannounced_bruteforce(&inst)?
            } else {
                let sol = solve_preannounced_dp(&inst)?;
                (sol.schedule, sol.revenue)
            };
            emit(&schedule_to_json(&schedule, Some(&revenue)), out.as_deref())
        }
        Command::Solve { mode: SolveMode::Cp { input, grid_delta, out } } => {
            let inst = load(&input)?;
            let sol = solve_spne_single_buyer(&inst, &build_price_grid(&inst, grid_delta.as_ref())?)?;
            let v = json!({
                "prices": price_list(&sol.prices),
                "revenue": format_rational(&sol.revenue),
                "buyer_utility": format_rational(&sol.buyer_utility),
                "plan": sol.plan,
            });
            emit(&v.to_string(), out.as_deref())
        }
        Command::Respond { input, schedule, prices, out } => {
            let inst = load(&input)?;
            let schedule = match (schedule, prices) {
                (Some(path), _) => schedule_from_json(&fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?)?,
                (None, Some(list)) => PriceSchedule::new(list.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?),
                (None, None) => bail!("give --schedule or --prices"),
            };
            emit(&best_response(&inst, &schedule)?.to_json().to_string(), out.as_deref())
        }
        Command::Simulate { input, profile, out } => {
            let inst = load(&input)?;
            let sim = simulate_profile(&inst, &profile_named(&profile, &inst)?)?;
            let v = json!({
                "prices": price_list(&sim.prices),
                "sales": sim.sales,
                "revenue": format_rational(&sim.revenue),
                "outcome": sim.outcome.to_json(),
            });
            emit(&v.to_string(), out.as_deref())
        }
        Command::Certify { input, profile, grid_delta, inventory_cap, max_states, out } => {
            let inst = load(&input)?;
            let profile = profile_named(&profile, &inst)?;
            let grid = build_price_grid(&inst, grid_delta.as_ref())?;
            let report = crate::sweep::thread_pool()?
                .install(|| certify_spne(&inst, &profile, &grid, CertifyOptions { inventory_cap, max_states }))?;
            emit(&report_json(&report).to_string(), out.as_deref())
        }
        Command::Bounds { input, out } => {
            let inst = load(&input)?;
            let b = discrimination_upper_bound(&inst)?;
            let v = json!({
                "sum_values": format_rational(&b.sum_values),
                "bound": format_rational(&b.bound),
                "holds": b.holds,
                "items": b.items,
                "fixed_revenue": format_rational(&b.fixed_revenue),
            });
            emit(&v.to_string(), out.as_deref())
        }
        Command::Sweep { family, params, epsilon, csv, no_timing } => {
            let params = parse_params(&params)?;
            let rows = ratio_sweep(family, &params, &SweepOptions { epsilon, no_timing })?;
            match csv {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&rows, file)
                }
                None => write_csv(&rows, std::io::stdout().lock()),
            }
        }
    }
}
