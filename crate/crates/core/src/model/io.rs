//! JSON file formats. Rationals travel as strings (`"17"`, `"3/2"`, `"1.5"`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, Rational};
use super::{DemandSide, MarketInstance, Price, PriceSchedule, StorageCost};
use crate::error::Result;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    periods: usize,
    storage: StorageFile,
    demand: DemandFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum StorageFile {
    Linear { c: String },
    Concave { cum: Vec<String> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum DemandFile {
    Multi { values: Vec<Vec<String>> },
    Single { marginals: Vec<Vec<String>> },
}

fn parse_matrix(rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter().map(|row| row.iter().map(|s| parse_rational(s)).collect()).collect()
}

fn format_matrix(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|row| row.iter().map(format_rational).collect()).collect()
}

pub fn instance_from_json(text: &str) -> Result<MarketInstance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let storage = match file.storage {
        StorageFile::Linear { c } => StorageCost::Linear { c: parse_rational(&c)? },
        StorageFile::Concave { cum } => StorageCost::ConcaveTable {
            cum: cum.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
        },
    };
    let demand = match file.demand {
        DemandFile::Multi { values } => DemandSide::MultiBuyer { values: parse_matrix(&values)? },
        DemandFile::Single { marginals } => DemandSide::SingleBuyer { marginals: parse_matrix(&marginals)? },
    };
    MarketInstance::new(file.periods, storage, demand)
}

pub fn instance_to_json(inst: &MarketInstance) -> String {
    let storage = match inst.storage() {
        StorageCost::Linear { c } => StorageFile::Linear { c: format_rational(c) },
        StorageCost::ConcaveTable { cum } => StorageFile::Concave { cum: cum.iter().map(format_rational).collect() },
    };
    let demand = match inst.demand() {
        DemandSide::MultiBuyer { values } => DemandFile::Multi { values: format_matrix(values) },
        DemandSide::SingleBuyer { marginals } => DemandFile::Single { marginals: format_matrix(marginals) },
    };
    let file = InstanceFile { periods: inst.periods(), storage, demand };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<MarketInstance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &MarketInstance) -> Result<()> {
    std::fs::write(path, instance_to_json(inst) + "\n")?;
    Ok(())
}

/// `{"prices":["17","15"],"revenue":"32"}`; `"skip"` marks a skipped period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub prices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revenue: Option<String>,
}

impl ScheduleFile {
    pub fn new(schedule: &PriceSchedule, revenue: Option<&Rational>) -> Self {
        Self {
            prices: schedule.prices().iter().map(Price::to_string).collect(),
            revenue: revenue.map(format_rational),
        }
    }

    pub fn schedule(&self) -> Result<PriceSchedule> {
        Ok(PriceSchedule::new(self.prices.iter().map(|s| s.parse()).collect::<Result<_>>()?))
    }
}

pub fn schedule_from_json(text: &str) -> Result<PriceSchedule> {
    let file: ScheduleFile = serde_json::from_str(text)?;
    file.schedule()
}

pub fn schedule_to_json(schedule: &PriceSchedule, revenue: Option<&Rational>) -> String {
    serde_json::to_string(&ScheduleFile::new(schedule, revenue)).expect("schedule serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::model::{rat, ratio};

    #[test]
    fn reads_the_documented_format() {
        let text = r#"{ "periods": 2, "storage": {"kind":"linear","c":"1"},
            "demand": {"kind":"multi","values":[["17","15"],["10","4"]]} }"#;
        let inst = instance_from_json(text).unwrap();
        assert_eq!(inst.periods(), 2);
        assert_eq!(inst.storage(), &StorageCost::Linear { c: rat(1) });
        let concave = r#"{ "periods": 1, "storage": {"kind":"concave","cum":["0","3/2","25/16"]},
            "demand": {"kind":"single","marginals":[["2.5"],["1"]]} }"#;
        let inst = instance_from_json(concave).unwrap();
        assert_eq!(inst.units(0, 1), &[ratio(5, 2), rat(1)]);
    }

    #[test]
    fn rejects_invalid_content() {
        let bad_kind = r#"{"periods":1,"storage":{"kind":"quadratic"},"demand":{"kind":"multi","values":[["1"]]}}"#;
        assert!(matches!(instance_from_json(bad_kind), Err(Error::Json(_))));
        let bad_number = r#"{"periods":1,"storage":{"kind":"linear","c":"x"},"demand":{"kind":"multi","values":[["1"]]}}"#;
        assert!(matches!(instance_from_json(bad_number), Err(Error::ParseRational(_))));
        let float = r#"{"periods":1,"storage":{"kind":"linear","c":1.0},"demand":{"kind":"multi","values":[["1"]]}}"#;
        assert!(instance_from_json(float).is_err());
    }

    #[test]
    fn schedule_format_is_exact() {
        let s = PriceSchedule::new(vec![Price::Finite(rat(17)), Price::Skip, Price::Finite(ratio(3, 2))]);
        let text = schedule_to_json(&s, Some(&rat(32)));
        assert_eq!(text, r#"{"prices":["17","skip","3/2"],"revenue":"32"}"#);
        assert_eq!(schedule_from_json(&text).unwrap(), s);
    }
}
