//! Unbalanced country × month panel storage.
//!
//! Observations live in per-series ordered maps so iteration order (and thus
//! every downstream sum) is deterministic. Missing data is represented by
//! absent entries, never by sentinel values.

mod controls;
mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calendar::{Month, MonthRange};
use crate::error::{Error, Result};

pub use controls::{build_lagged_controls, ControlBlock};
pub(crate) use controls::dense_series;
pub use io::{load_panel, load_schema, read_panel, write_panel_csv, write_schema, LoadReport};

/// Country code under which global-control series are stored.
pub const GLOBAL_COUNTRY: &str = "GLOBAL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    #[serde(rename = "log-times-100")]
    LogTimes100,
    Level,
    DiffLevel,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Outcome,
    Control,
    GlobalControl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableDecl {
    pub name: String,
    pub transform: Transform,
    pub role: Role,
}

impl VariableDecl {
    pub fn new(name: impl Into<String>, transform: Transform, role: Role) -> Self {
        Self {
            name: name.into(),
            transform,
            role,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesKey {
    pub country: String,
    pub variable: String,
}

impl SeriesKey {
    pub fn new(country: impl Into<String>, variable: impl Into<String>) -> Result<Self> {
        let country = country.into();
        let variable = variable.into();
        if country.trim().is_empty() || variable.trim().is_empty() {
            return Err(Error::Schema("empty country or variable name".into()));
        }
        Ok(Self { country, variable })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub key: SeriesKey,
    pub date: Month,
    pub value: f64,
}

/// The panel: observations, their declarations and the active sample
/// restrictions.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    series: BTreeMap<SeriesKey, BTreeMap<Month, f64>>,
    declarations: Vec<VariableDecl>,
    country_filters: BTreeMap<String, MonthRange>,
    date_filter: Option<MonthRange>,
    transformed: BTreeSet<String>,
}

impl PanelDataset {
    pub fn new(declarations: Vec<VariableDecl>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for d in &declarations {
            if d.name.trim().is_empty() {
                return Err(Error::Schema("empty variable name in schema".into()));
            }
            if !seen.insert(d.name.as_str()) {
                return Err(Error::Schema(format!("variable `{}` declared twice", d.name)));
            }
        }
        Ok(Self {
            series: BTreeMap::new(),
            declarations,
            country_filters: BTreeMap::new(),
            date_filter: None,
            transformed: BTreeSet::new(),
        })
    }

    pub fn insert(&mut self, obs: Observation) -> Result<()> {
        if self.declaration(&obs.key.variable).is_none() {
            return Err(Error::Schema(format!(
                "variable `{}` has no declaration",
                obs.key.variable
            )));
        }
        if !obs.value.is_finite() {
            return Err(Error::Schema(format!(
                "non-finite value for ({}, {}, {})",
                obs.key.country, obs.key.variable, obs.date
            )));
        }
        let slot = self.series.entry(obs.key.clone()).or_default();
        if slot.contains_key(&obs.date) {
            return Err(Error::DuplicateKey {
                country: obs.key.country,
                variable: obs.key.variable,
                date: obs.date,
            });
        }
        slot.insert(obs.date, obs.value);
        Ok(())
    }

    pub fn declarations(&self) -> &[VariableDecl] {
        &self.declarations
    }

    pub fn declaration(&self, name: &str) -> Option<&VariableDecl> {
        self.declarations.iter().find(|d| d.name == name)
    }

    pub fn is_transformed(&self, var: &str) -> bool {
        self.transformed.contains(var)
    }

    /// Countries with at least one observation, excluding the global pseudo-country.
    pub fn countries(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .series
            .keys()
            .map(|k| k.country.as_str())
            .filter(|c| *c != GLOBAL_COUNTRY)
            .collect();
        set.into_iter().map(str::to_owned).collect()
    }

    pub fn series(&self, country: &str, variable: &str) -> Option<&BTreeMap<Month, f64>> {
        self.series.get(&SeriesKey {
            country: country.to_owned(),
            variable: variable.to_owned(),
        })
    }

    pub fn get(&self, country: &str, variable: &str, date: Month) -> Option<f64> {
        self.series(country, variable)?.get(&date).copied()
    }

    pub fn observations(&self) -> impl Iterator<Item = Observation> + '_ {
        self.series.iter().flat_map(|(k, s)| {
            s.iter().map(move |(&date, &value)| Observation {
                key: k.clone(),
                date,
                value,
            })
        })
    }

    pub fn n_obs(&self) -> usize {
        self.series.values().map(BTreeMap::len).sum()
    }

    pub fn counts_by_country(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for (k, s) in &self.series {
            *out.entry(k.country.clone()).or_insert(0) += s.len();
        }
        out
    }

    /// Smallest interval covering every observation.
    pub fn date_range(&self) -> Option<MonthRange> {
        let first = self.series.values().filter_map(|s| s.keys().next()).min()?;
        let last = self.series.values().filter_map(|s| s.keys().next_back()).max()?;
        Some(MonthRange {
            start: *first,
            end: *last,
        })
    }

    pub fn date_filter(&self) -> Option<MonthRange> {
        self.date_filter
    }

    pub fn country_filters(&self) -> &BTreeMap<String, MonthRange> {
        &self.country_filters
    }

    /// Drops every observation outside `range`.
    pub fn with_date_range(mut self, range: MonthRange) -> Self {
        let range = match self.date_filter {
            Some(prev) => prev.intersect(&range).unwrap_or(range),
            None => range,
        };
        for s in self.series.values_mut() {
            s.retain(|m, _| range.contains(*m));
        }
        self.series.retain(|_, s| !s.is_empty());
        self.date_filter = Some(range);
        self
    }

    /// Restricts one country to an inclusive interval (e.g. membership before
    /// a currency union).
    pub fn with_country_filter(mut self, country: &str, range: MonthRange) -> Self {
        for (k, s) in self.series.iter_mut() {
            if k.country == country {
                s.retain(|m, _| range.contains(*m));
            }
        }
        self.series.retain(|_, s| !s.is_empty());
        self.country_filters.insert(country.to_owned(), range);
        self
    }

    /// Keeps only the listed countries (global series always survive).
    pub fn restrict_countries(mut self, keep: &[String]) -> Self {
        let keep: BTreeSet<&str> = keep.iter().map(String::as_str).collect();
        self.series
            .retain(|k, _| k.country == GLOBAL_COUNTRY || keep.contains(k.country.as_str()));
        self
    }

    /// Applies the declared transform of `var` once.
    pub fn apply_transform(&self, var: &str) -> Result<Self> {
        let decl = self
            .declaration(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_owned()))?
            .clone();
        if self.transformed.contains(var) {
            return Err(Error::State(format!("transform already applied to `{var}`")));
        }
        let mut out = self.clone();
        for (k, s) in out.series.iter_mut().filter(|(k, _)| k.variable == var) {
            match decl.transform {
                Transform::LogTimes100 => {
                    for (&date, v) in s.iter_mut() {
                        if !(*v > 0.0) {
                            return Err(Error::Domain {
                                country: k.country.clone(),
                                variable: var.to_owned(),
                                date,
                                value: *v,
                            });
                        }
                        *v = 100.0 * v.ln();
                    }
                }
                Transform::DiffLevel => {
                    // difference against the previous available observation
                    let mut diffed = BTreeMap::new();
                    let mut prev: Option<f64> = None;
                    for (&date, &v) in s.iter() {
                        if let Some(p) = prev {
                            diffed.insert(date, v - p);
                        }
                        prev = Some(v);
                    }
                    *s = diffed;
                }
                Transform::Level | Transform::None => {}
            }
        }
        out.series.retain(|_, s| !s.is_empty());
        out.transformed.insert(var.to_owned());
        Ok(out)
    }

    /// Applies every declared transform that has not been applied yet.
    pub fn apply_all_transforms(&self) -> Result<Self> {
        let mut out = self.clone();
        for d in &self.declarations {
            if !out.transformed.contains(&d.name) {
                out = out.apply_transform(&d.name)?;
            }
        }
        Ok(out)
    }
}

impl FromStr for Transform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| Error::Schema(format!("unknown transform `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Month {
        s.parse().unwrap()
    }

    fn ds_with(var: Transform, values: &[(&str, &str, f64)]) -> PanelDataset {
        let mut ds = PanelDataset::new(vec![VariableDecl::new("x", var, Role::Outcome)]).unwrap();
        for &(c, d, v) in values {
            ds.insert(Observation {
                key: SeriesKey::new(c, "x").unwrap(),
                date: m(d),
                value: v,
            })
            .unwrap();
        }
        ds
    }

    #[test]
    fn log_times_100_of_one_is_zero() {
        let ds = ds_with(Transform::LogTimes100, &[("BRA", "2000-01", 1.0)]);
        let t = ds.apply_transform("x").unwrap();
        assert_eq!(t.get("BRA", "x", m("2000-01")), Some(0.0));
    }

    #[test]
    fn log_times_100_of_e_squared() {
        let e2 = std::f64::consts::E.powi(2);
        let ds = ds_with(Transform::LogTimes100, &[("BRA", "2000-01", e2)]);
        let v = ds.apply_transform("x").unwrap().get("BRA", "x", m("2000-01")).unwrap();
        assert!((v - 200.0).abs() < 1e-12);
    }

    #[test]
    fn log_rejects_non_positive_with_location() {
        let ds = ds_with(Transform::LogTimes100, &[("BRA", "2000-01", 1.0), ("BRA", "2000-02", 0.0)]);
        match ds.apply_transform("x") {
            Err(Error::Domain { country, date, .. }) => {
                assert_eq!(country, "BRA");
                assert_eq!(date, m("2000-02"));
            }
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn diff_level_drops_first() {
        let ds = ds_with(Transform::DiffLevel, &[("BRA", "2000-01", 100.0), ("BRA", "2000-02", 110.0)]);
        let t = ds.apply_transform("x").unwrap();
        assert_eq!(t.n_obs(), 1);
        assert_eq!(t.get("BRA", "x", m("2000-02")), Some(10.0));
    }

    #[test]
    fn double_application_is_state_error() {
        let ds = ds_with(Transform::Level, &[("BRA", "2000-01", 1.0)]);
        let t = ds.apply_transform("x").unwrap();
        assert!(matches!(t.apply_transform("x"), Err(Error::State(_))));
        assert!(matches!(ds.apply_transform("nope"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn duplicate_insert_rejected() {
        let mut ds = ds_with(Transform::Level, &[("BRA", "2005-03", 1.0)]);
        let err = ds
            .insert(Observation {
                key: SeriesKey::new("BRA", "x").unwrap(),
                date: m("2005-03"),
                value: 2.0,
            })
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateKey { .. }));
    }

    #[test]
    fn filters_restrict_sample() {
        let ds = ds_with(
            Transform::Level,
            &[
                ("AUT", "1998-12", 1.0),
                ("AUT", "1999-01", 1.0),
                ("AUT", "1999-02", 1.0),
                ("CAN", "1999-02", 1.0),
            ],
        );
        let f = ds
            .clone()
            .with_country_filter("AUT", MonthRange::new(m("1998-01"), m("1999-01")).unwrap());
        assert_eq!(f.counts_by_country()["AUT"], 2);
        assert_eq!(f.counts_by_country()["CAN"], 1);
        let d = ds.clone().with_date_range(MonthRange::new(m("1999-02"), m("2000-01")).unwrap());
        assert_eq!(d.n_obs(), 2);
        let r = ds.restrict_countries(&["CAN".to_owned()]);
        assert_eq!(r.countries(), vec!["CAN".to_owned()]);
    }
}
