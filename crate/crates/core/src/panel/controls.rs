use super::{PanelDataset, Role, GLOBAL_COUNTRY};
use crate::calendar::{Month, MonthRange};
use crate::error::{Error, Result};

/// Lagged control regressors aligned on a country × month grid.
///
/// Row `(i, t)` holds `x_{i,t-1}, …, x_{i,t-L}` for every requested variable,
/// in request order. Global controls are read from the global pseudo-country
/// and replicated across countries.
#[derive(Debug, Clone)]
pub struct ControlBlock {
    names: Vec<String>,
    countries: Vec<String>,
    range: MonthRange,
    width: usize,
    values: Vec<f64>,
    available: Vec<bool>,
}

impl ControlBlock {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn range(&self) -> MonthRange {
        self.range
    }

    fn slot(&self, country: usize, t: Month) -> Option<usize> {
        if country >= self.countries.len() || !self.range.contains(t) {
            return None;
        }
        Some(country * self.range.len() + self.range.start.months_until(t) as usize)
    }

    /// The lag row for a country index, or `None` when any lag is missing.
    pub fn row_at(&self, country: usize, t: Month) -> Option<&[f64]> {
        let s = self.slot(country, t)?;
        self.available[s].then(|| &self.values[s * self.width..(s + 1) * self.width])
    }

    pub fn row(&self, country: &str, t: Month) -> Option<&[f64]> {
        let i = self.countries.iter().position(|c| c == country)?;
        self.row_at(i, t)
    }
}

/// Reads one series onto a dense month grid.
pub(crate) fn dense_series(
    ds: &PanelDataset,
    country: &str,
    variable: &str,
    range: MonthRange,
) -> Vec<Option<f64>> {
    let mut out = vec![None; range.len()];
    if let Some(s) = ds.series(country, variable) {
        for (&m, &v) in s.range(range.start..=range.end) {
            out[range.start.months_until(m) as usize] = Some(v);
        }
    }
    out
}

/// Builds `lags` lags of each variable for every country of `ds`.
///
/// Variables must be declared; global controls come from the global
/// pseudo-country, everything else from the country's own series (this
/// includes outcome variables used as their own lagged controls).
pub fn build_lagged_controls(ds: &PanelDataset, vars: &[String], lags: usize) -> Result<ControlBlock> {
    if lags == 0 && !vars.is_empty() {
        return Err(Error::Config("lag count must be at least 1".into()));
    }
    let mut globals = Vec::with_capacity(vars.len());
    for v in vars {
        let decl = ds
            .declaration(v)
            .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
        globals.push(decl.role == Role::GlobalControl);
    }

    let countries = ds.countries();
    let range = ds.date_range().unwrap_or(MonthRange {
        start: Month::MIN,
        end: Month::MIN,
    });
    let width = vars.len() * lags;
    let n_months = range.len();
    let mut values = vec![0.0; countries.len() * n_months * width];
    let mut available = vec![true; countries.len() * n_months];

    let global_grids: Vec<Option<Vec<Option<f64>>>> = vars
        .iter()
        .zip(&globals)
        .map(|(v, &g)| g.then(|| dense_series(ds, GLOBAL_COUNTRY, v, range)))
        .collect();

    for (ci, country) in countries.iter().enumerate() {
        for (vi, var) in vars.iter().enumerate() {
            let own;
            let grid = match &global_grids[vi] {
                Some(g) => g,
                None => {
                    own = dense_series(ds, country, var, range);
                    &own
                }
            };
            for t in 0..n_months {
                let slot = ci * n_months + t;
                if !available[slot] {
                    continue;
                }
                for l in 1..=lags {
                    let v = t.checked_sub(l).and_then(|s| grid[s]);
                    match v {
                        Some(v) => values[slot * width + vi * lags + l - 1] = v,
                        None => {
                            available[slot] = false;
                            break;
                        }
                    }
                }
            }
        }
    }

    let names = vars
        .iter()
        .flat_map(|v| (1..=lags).map(move |l| format!("{v}_l{l}")))
        .collect();
    Ok(ControlBlock {
        names,
        countries,
        range,
        width,
        values,
        available,
    })
}
