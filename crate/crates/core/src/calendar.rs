//! Integer-indexed calendar months.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A calendar month stored as `year * 12 + (month - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month(i32);

impl Month {
    pub const MIN: Month = Month(1900 * 12);
    pub const MAX: Month = Month(2100 * 12 + 11);

    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Schema(format!("month {month} out of range")));
        }
        Self::from_index(year * 12 + month as i32 - 1)
    }

    pub fn from_index(index: i32) -> Result<Self> {
        let m = Month(index);
        if m < Self::MIN || m > Self::MAX {
            return Err(Error::Schema(format!("date {m} outside 1900-01..2100-12")));
        }
        Ok(m)
    }

    pub fn index(self) -> i32 {
        self.0
    }

    pub fn year(self) -> i32 {
        self.0.div_euclid(12)
    }

    /// Calendar month of the year, 1..=12.
    pub fn month_of_year(self) -> u32 {
        self.0.rem_euclid(12) as u32 + 1
    }

    /// Shifts by `k` months without range checking; callers stay inside
    /// dataset bounds.
    pub fn offset(self, k: i32) -> Month {
        Month(self.0 + k)
    }

    pub fn months_until(self, later: Month) -> i32 {
        later.0 - self.0
    }

    /// Parses `YYYY-MM-DD` and keeps the month.
    pub fn parse_day(s: &str) -> Result<Self> {
        let d = chrono::NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
            .map_err(|e| Error::Schema(format!("bad date `{s}`: {e}")))?;
        use chrono::Datelike;
        Month::new(d.year(), d.month())
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year(), self.month_of_year())
    }
}

impl FromStr for Month {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Schema(format!("bad month `{s}`, expected YYYY-MM"));
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month: u32 = m.parse().map_err(|_| bad())?;
        Month::new(year, month)
    }
}

impl Serialize for Month {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Month {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive month interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthRange {
    pub start: Month,
    pub end: Month,
}

impl MonthRange {
    pub fn new(start: Month, end: Month) -> Result<Self> {
        if end < start {
            return Err(Error::Config(format!("empty range {start}..{end}")));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, m: Month) -> bool {
        self.start <= m && m <= self.end
    }

    pub fn len(&self) -> usize {
        (self.end.0 - self.start.0 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = Month> {
        (self.start.0..=self.end.0).map(Month)
    }

    pub fn intersect(&self, other: &MonthRange) -> Option<MonthRange> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(MonthRange { start, end })
    }
}
