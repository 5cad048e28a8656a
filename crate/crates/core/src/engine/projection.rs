use super::{fit_problem, HorizonFit, RegressionProblem, RowId};
use crate::calendar::{Month, MonthRange};
use crate::error::{Error, Result};
use crate::irf::{shock_values, Family, LpSpecification};
use crate::linalg::Matrix;
use crate::panel::{build_lagged_controls, ControlBlock, PanelDataset};
use crate::scalar::Scalar;
use crate::shock::ShockSeries;

/// A panel aligned for local projections: dense outcome grid, shock vector
/// and lagged controls. Immutable once built, so horizons and families can be
/// estimated concurrently from one instance.
#[derive(Debug, Clone)]
pub struct LocalProjection {
    countries: Vec<String>,
    range: MonthRange,
    outcome: Vec<Option<f64>>,
    shock: Vec<Option<f64>>,
    controls: ControlBlock,
    fe: bool,
}

impl LocalProjection {
    pub fn new(ds: &PanelDataset, shock: &ShockSeries, spec: &LpSpecification) -> Result<Self> {
        spec.validate()?;
        if ds.declaration(&spec.outcome).is_none() {
            return Err(Error::UnknownVariable(spec.outcome.clone()));
        }
        let controls = build_lagged_controls(ds, &spec.controls, spec.lags)?;
        let countries = controls.countries().to_vec();
        let range = controls.range();
        let months = range.len();
        let mut outcome = Vec::with_capacity(countries.len() * months);
        for c in &countries {
            outcome.extend(crate::panel::dense_series(ds, c, &spec.outcome, range));
        }
        let shock = range.iter().map(|m| shock.get(m)).collect();
        Ok(Self {
            countries,
            range,
            outcome,
            shock,
            controls,
            fe: spec.fe_enabled,
        })
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn range(&self) -> MonthRange {
        self.range
    }

    /// `(country index, t)` pairs with the outcome at `t + h`, the shock at
    /// `t` and every control lag available.
    pub fn usable_rows(&self, h: usize) -> Vec<(usize, Month)> {
        let months = self.range.len();
        let mut out = Vec::new();
        for ci in 0..self.countries.len() {
            for ti in 0..months.saturating_sub(h) {
                let t = self.range.start.offset(ti as i32);
                if self.shock[ti].is_some()
                    && self.outcome[ci * months + ti + h].is_some()
                    && self.controls.row_at(ci, t).is_some()
                {
                    out.push((ci, t));
                }
            }
        }
        out
    }

    pub fn column_names(&self, family: Family) -> Vec<String> {
        let mut names: Vec<String> = family.shock_column_names().iter().map(|s| s.to_string()).collect();
        if family == Family::SignConditioned {
            names.extend(self.controls.names().iter().map(|n| format!("{n}_x_pos")));
            names.extend(self.controls.names().iter().map(|n| format!("{n}_x_nonpos")));
        } else {
            names.extend(self.controls.names().iter().cloned());
        }
        if !self.fe {
            names.push("const".into());
        }
        names
    }

    /// Stacked regression for one family and horizon, before absorption.
    pub fn problem<T: Scalar>(&self, family: Family, h: usize) -> Result<RegressionProblem<T>> {
        let rows = self.usable_rows(h);
        let names = self.column_names(family);
        if rows.is_empty() {
            return Err(Error::InsufficientSample {
                h,
                rows: 0,
                columns: names.len(),
            });
        }
        let n = rows.len();
        let months = self.range.len();
        let w = self.controls.width();
        let mut cols: Vec<Vec<T>> = vec![Vec::with_capacity(n); names.len()];
        let mut y = Vec::with_capacity(n);
        let mut cluster_ids = Vec::with_capacity(n);
        let mut fe_groups = Vec::with_capacity(n);
        let mut ids = Vec::with_capacity(n);
        let mut shock_buf = Vec::with_capacity(2);

        for &(ci, t) in &rows {
            let ti = self.range.start.months_until(t) as usize;
            let eps = self.shock[ti].expect("usable row has a shock");
            y.push(T::lit(self.outcome[ci * months + ti + h].expect("usable row has an outcome")));
            shock_values(family, eps, &mut shock_buf);
            let s = shock_buf.len();
            for (j, &v) in shock_buf.iter().enumerate() {
                cols[j].push(T::lit(v));
            }
            let ctrl = self.controls.row_at(ci, t).expect("usable row has controls");
            if family == Family::SignConditioned {
                let d = if eps > 0.0 { 1.0 } else { 0.0 };
                for (j, &x) in ctrl.iter().enumerate() {
                    cols[s + j].push(T::lit(d * x));
                    cols[s + w + j].push(T::lit((1.0 - d) * x));
                }
            } else {
                for (j, &x) in ctrl.iter().enumerate() {
                    cols[s + j].push(T::lit(x));
                }
            }
            if !self.fe {
                cols[names.len() - 1].push(T::one());
            }
            cluster_ids.push(t.index() as i64);
            fe_groups.push(ci as u64 * 12 + (t.month_of_year() as u64 - 1));
            ids.push(RowId {
                country: ci as u32,
                t,
                h,
            });
        }
        RegressionProblem::new(y, Matrix::from_columns(n, &cols), names, cluster_ids, fe_groups, ids)
    }

    pub fn fit<T: Scalar>(&self, family: Family, h: usize) -> Result<HorizonFit<T>> {
        let prob = self.problem::<T>(family, h)?;
        fit_problem(&prob, h, self.fe)
    }
}

/// Assembles and estimates the regression for horizon `h`.
pub fn run_horizon<T: Scalar>(
    ds: &PanelDataset,
    shock: &ShockSeries,
    spec: &LpSpecification,
    h: usize,
) -> Result<HorizonFit<T>> {
    if h > spec.horizons {
        return Err(Error::Config(format!(
            "horizon {h} beyond maximum {}",
            spec.horizons
        )));
    }
    LocalProjection::new(ds, shock, spec)?.fit(spec.family, h)
}
