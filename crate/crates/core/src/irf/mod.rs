//! Sign-dependent regression families and the mapping from fitted
//! coefficients to tightening / easing impulse responses.

mod asymmetry;
mod columns;
mod delta;
mod export;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{HorizonFit, LocalProjection};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use asymmetry::{test_asymmetry, AsymmetryTest};
pub use columns::{build_shock_columns, shock_values};
pub use delta::{delta_bands, normal_quantile, Band};
pub use export::{band_label, irf_csv_header, write_irf_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `ε`
    Linear,
    /// `ε` and `|ε|`
    AbsSign,
    /// `max(ε, 0)` and `min(ε, 0)`
    Piecewise,
    /// `ε·D`, `ε·(1−D)` with every control split by `D = 1{ε > 0}`
    SignConditioned,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Linear,
        Family::AbsSign,
        Family::Piecewise,
        Family::SignConditioned,
    ];

    pub fn shock_column_names(self) -> &'static [&'static str] {
        match self {
            Family::Linear => &["shock"],
            Family::AbsSign => &["shock", "abs_shock"],
            Family::Piecewise => &["shock_pos", "shock_neg"],
            Family::SignConditioned => &["shock_pos", "shock_nonpos"],
        }
    }

    /// Linear combinations `(column, weight)` giving the tightening and
    /// easing responses.
    pub fn irf_weights(self) -> (Vec<(&'static str, f64)>, Vec<(&'static str, f64)>) {
        match self {
            Family::Linear => (vec![("shock", 1.0)], vec![("shock", -1.0)]),
            Family::AbsSign => (
                vec![("shock", 1.0), ("abs_shock", 1.0)],
                vec![("shock", -1.0), ("abs_shock", 1.0)],
            ),
            Family::Piecewise => (vec![("shock_pos", 1.0)], vec![("shock_neg", -1.0)]),
            Family::SignConditioned => (vec![("shock_pos", 1.0)], vec![("shock_nonpos", -1.0)]),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Linear => "linear",
            Family::AbsSign => "abs-sign",
            Family::Piecewise => "piecewise",
            Family::SignConditioned => "sign-conditioned",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown family `{s}`")))
    }
}

/// How the easing column is reported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EasingConvention {
    /// Response to a shock of `−1`.
    #[default]
    Response,
    /// Slope on the negative part of the shock (the negated response).
    Raw,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterBy {
    #[default]
    Date,
}

/// One regression family plus its sample and inference settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSpecification {
    pub family: Family,
    pub outcome: String,
    /// Variables entering with `lags` lags each.
    pub controls: Vec<String>,
    pub lags: usize,
    pub fe_enabled: bool,
    /// Maximum horizon `H`; responses cover `0..=H`.
    pub horizons: usize,
    pub band_levels: Vec<f64>,
    pub cluster: ClusterBy,
    pub easing: EasingConvention,
}

impl LpSpecification {
    pub fn new(family: Family, outcome: impl Into<String>) -> Self {
        Self {
            family,
            outcome: outcome.into(),
            controls: Vec::new(),
            lags: 4,
            fe_enabled: true,
            horizons: 24,
            band_levels: vec![0.68, 0.90],
            cluster: ClusterBy::Date,
            easing: EasingConvention::Response,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.outcome.trim().is_empty() {
            return Err(Error::Config("outcome variable is empty".into()));
        }
        if !self.controls.is_empty() && self.lags == 0 {
            return Err(Error::Config("lags must be at least 1".into()));
        }
        for &p in &self.band_levels {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!("band level {p} outside (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Responses at one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct IrfEntry<T> {
    pub h: usize,
    pub irf_plus: T,
    pub se_plus: T,
    pub irf_minus: T,
    pub se_minus: T,
    pub irf_linear: Option<T>,
    pub bands_plus: Vec<Band<T>>,
    pub bands_minus: Vec<Band<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IrfHorizon<T> {
    Estimated(IrfEntry<T>),
    /// Gap at this horizon; never interpolated.
    Missing { h: usize, reason: String },
}

impl<T> IrfHorizon<T> {
    pub fn h(&self) -> usize {
        match self {
            IrfHorizon::Estimated(e) => e.h,
            IrfHorizon::Missing { h, .. } => *h,
        }
    }

    pub fn entry(&self) -> Option<&IrfEntry<T>> {
        match self {
            IrfHorizon::Estimated(e) => Some(e),
            IrfHorizon::Missing { .. } => None,
        }
    }
}

/// Response paths over horizons `0..=H`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrfSet<T> {
    pub family: Family,
    pub levels: Vec<f64>,
    pub horizons: Vec<IrfHorizon<T>>,
    /// Outcome units per unit of shock.
    pub units: String,
}

impl<T: Scalar> IrfSet<T> {
    /// Fills the linear overlay from linear-family fits aligned by horizon.
    pub fn attach_linear(&mut self, linear: &[Result<HorizonFit<T>>]) {
        for (slot, fit) in self.horizons.iter_mut().zip(linear) {
            if let (IrfHorizon::Estimated(e), Ok(f)) = (slot, fit) {
                e.irf_linear = f.coefficient("shock");
            }
        }
    }
}

fn combine<T: Scalar>(fit: &HorizonFit<T>, weights: &[(&str, f64)]) -> Result<(T, Vec<T>)> {
    let mut w = vec![T::zero(); fit.coefficients.len()];
    let mut est = T::zero();
    for &(name, c) in weights {
        let i = fit.index_of(name).ok_or_else(|| Error::MissingCoefficient {
            name: name.to_owned(),
            reason: if fit.dropped_columns.iter().any(|d| d == name) {
                "dropped as collinear".into()
            } else {
                "not in the fitted model".into()
            },
        })?;
        w[i] = w[i] + T::lit(c);
        est = est + T::lit(c) * fit.coefficients[i];
    }
    Ok((est, w))
}

/// Maps one horizon's fit to tightening and easing responses with
/// delta-method bands.
pub fn irf_from_fit<T: Scalar>(
    family: Family,
    fit: &HorizonFit<T>,
    levels: &[f64],
    easing: EasingConvention,
) -> IrfHorizon<T> {
    let build = || -> Result<IrfEntry<T>> {
        let (wp, wm) = family.irf_weights();
        let (plus, w_plus) = combine(fit, &wp)?;
        let (mut minus, mut w_minus) = combine(fit, &wm)?;
        if easing == EasingConvention::Raw {
            minus = -minus;
            for v in &mut w_minus {
                *v = -*v;
            }
        }
        let (se_plus, bands_plus) = delta_bands(plus, &w_plus, &fit.covariance, levels)?;
        let (se_minus, bands_minus) = delta_bands(minus, &w_minus, &fit.covariance, levels)?;
        let irf_linear = match family {
            Family::Linear => fit.coefficient("shock"),
            _ => None,
        };
        Ok(IrfEntry {
            h: fit.h,
            irf_plus: plus,
            se_plus,
            irf_minus: minus,
            se_minus,
            irf_linear,
            bands_plus,
            bands_minus,
        })
    };
    match build() {
        Ok(e) => IrfHorizon::Estimated(e),
        Err(e) => IrfHorizon::Missing {
            h: fit.h,
            reason: e.to_string(),
        },
    }
}

/// Estimates every horizon `0..=H` of `spec.family` on a prepared
/// projection. Horizons run in parallel and come back ordered by `h`.
pub fn estimate_horizons<T: Scalar>(
    lp: &LocalProjection,
    family: Family,
    max_h: usize,
) -> Vec<Result<HorizonFit<T>>> {
    (0..=max_h)
        .into_par_iter()
        .map(|h| lp.fit::<T>(family, h))
        .collect()
}

/// Builds the response set from per-horizon fits; failed horizons become gaps.
pub fn assemble_irfs<T: Scalar>(
    spec: &LpSpecification,
    fits: &[Result<HorizonFit<T>>],
    units: impl Into<String>,
) -> IrfSet<T> {
    let horizons = fits
        .iter()
        .enumerate()
        .map(|(h, f)| match f {
            Ok(fit) => irf_from_fit(spec.family, fit, &spec.band_levels, spec.easing),
            Err(e) => IrfHorizon::Missing {
                h,
                reason: e.to_string(),
            },
        })
        .collect();
    IrfSet {
        family: spec.family,
        levels: spec.band_levels.clone(),
        horizons,
        units: units.into(),
    }
}
