//! Monetary policy shocks from high-frequency announcement surprises.
//!
//! The pipeline runs event surprises through a principal-component factor,
//! separates policy from information news by sign restrictions on the joint
//! (rate, stock) response, and sums events into a monthly series.

mod io;
mod pca;
mod poor_man;
mod rotation;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::calendar::{Month, MonthRange};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use io::{read_events, read_shock_csv, sidecar_path, write_shock_csv, ShockSidecar};
pub use pca::{first_principal_component, PrincipalComponent};
pub use poor_man::{classify_pair, poor_mans_classify, Classification, PoorManResult};
pub use rotation::{
    identify_rotation, identify_rotation_from_covariance, identify_rotation_pairs, AdmissibleArc,
    RotationResult, DEFAULT_GRID_STEP,
};

/// One policy announcement.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSurprise<T> {
    pub date: NaiveDate,
    /// One entry per futures maturity, in percentage points.
    pub rate_surprises: Vec<T>,
    /// Equity index change, in percent.
    pub stock_surprise: T,
}

impl<T: Scalar> EventSurprise<T> {
    pub fn new(date: NaiveDate, rate_surprises: Vec<T>, stock_surprise: T) -> Result<Self> {
        if rate_surprises.is_empty() {
            return Err(Error::Schema(format!("event {date} has no rate surprises")));
        }
        if !stock_surprise.is_finite() || rate_surprises.iter().any(|v| !v.is_finite()) {
            return Err(Error::Schema(format!("event {date} has non-finite surprises")));
        }
        Ok(Self {
            date,
            rate_surprises,
            stock_surprise,
        })
    }

    pub fn month(&self) -> Result<Month> {
        use chrono::Datelike;
        Month::new(self.date.year(), self.date.month())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockMethod {
    MedianRotation,
    PoorMan,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockUnits {
    StandardDeviation,
    PercentagePoint,
}

impl fmt::Display for ShockUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShockUnits::StandardDeviation => "standard-deviation",
            ShockUnits::PercentagePoint => "percentage-point",
        })
    }
}

impl FromStr for ShockUnits {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard-deviation" => Ok(Self::StandardDeviation),
            "percentage-point" => Ok(Self::PercentagePoint),
            _ => Err(Error::Config(format!("unknown shock units `{s}`"))),
        }
    }
}

/// Monthly shock series with declared provenance and units.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockSeries {
    entries: BTreeMap<Month, f64>,
    pub method: ShockMethod,
    pub units: ShockUnits,
}

impl ShockSeries {
    pub fn new(method: ShockMethod, units: ShockUnits) -> Self {
        Self {
            entries: BTreeMap::new(),
            method,
            units,
        }
    }

    pub fn from_entries(
        entries: impl IntoIterator<Item = (Month, f64)>,
        method: ShockMethod,
        units: ShockUnits,
    ) -> Result<Self> {
        let mut s = Self::new(method, units);
        for (m, v) in entries {
            s.insert(m, v)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, month: Month, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::Schema(format!("non-finite shock at {month}")));
        }
        if self.entries.insert(month, value).is_some() {
            return Err(Error::Schema(format!("two shock values for {month}")));
        }
        Ok(())
    }

    pub fn get(&self, month: Month) -> Option<f64> {
        self.entries.get(&month).copied()
    }

    pub fn entries(&self) -> &BTreeMap<Month, f64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn range(&self) -> Option<MonthRange> {
        let start = *self.entries.keys().next()?;
        let end = *self.entries.keys().next_back()?;
        Some(MonthRange { start, end })
    }

    /// Fills every month of `range` without an entry with zero.
    pub fn densify(&self, range: MonthRange) -> Self {
        let mut out = self.clone();
        for m in range.iter() {
            out.entries.entry(m).or_insert(0.0);
        }
        out
    }

    /// Multiplies every value by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= c;
        }
        out
    }
}

/// Sums event-level values within calendar months.
pub fn aggregate_monthly(
    events: &[(NaiveDate, f64)],
    method: ShockMethod,
    units: ShockUnits,
) -> Result<ShockSeries> {
    use chrono::Datelike;
    let mut sums: BTreeMap<Month, f64> = BTreeMap::new();
    for &(d, v) in events {
        *sums.entry(Month::new(d.year(), d.month())?).or_insert(0.0) += v;
    }
    ShockSeries::from_entries(sums, method, units)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn m(s: &str) -> Month {
        s.parse().unwrap()
    }

    #[test]
    fn events_in_same_month_add() {
        let s = aggregate_monthly(
            &[(d("2010-06-03"), 0.1), (d("2010-06-24"), -0.04)],
            ShockMethod::PoorMan,
            ShockUnits::PercentagePoint,
        )
        .unwrap();
        assert!((s.get(m("2010-06")).unwrap() - 0.06).abs() < 1e-15);
    }

    #[test]
    fn empty_month_is_zero_after_densify() {
        let s = aggregate_monthly(
            &[(d("2010-06-03"), 0.1), (d("2010-08-03"), 0.2)],
            ShockMethod::PoorMan,
            ShockUnits::PercentagePoint,
        )
        .unwrap();
        assert_eq!(s.get(m("2010-07")), None);
        let dense = s.densify(s.range().unwrap());
        assert_eq!(dense.get(m("2010-07")), Some(0.0));
        assert_eq!(dense.len(), 3);
    }

    #[test]
    fn permutation_leaves_months_unchanged() {
        let ev = vec![
            (d("2010-06-03"), 0.125),
            (d("2010-06-24"), -0.5),
            (d("2010-07-01"), 0.25),
        ];
        let mut rev = ev.clone();
        rev.reverse();
        let a = aggregate_monthly(&ev, ShockMethod::External, ShockUnits::PercentagePoint).unwrap();
        let b = aggregate_monthly(&rev, ShockMethod::External, ShockUnits::PercentagePoint).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn event_validation() {
        assert!(EventSurprise::<f64>::new(d("2010-01-01"), vec![], 0.0).is_err());
        assert!(EventSurprise::new(d("2010-01-01"), vec![f64::NAN], 0.0).is_err());
        assert!(EventSurprise::new(d("2010-01-01"), vec![0.1], f64::INFINITY).is_err());
    }
}
