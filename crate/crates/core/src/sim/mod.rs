//! Synthetic panels with known sign-dependent responses.
//!
//! The process is
//! `y_{i,t} = ρ·y_{i,t−1} + θ⁺·max(ε_t,0) + θ⁻·min(ε_t,0) + fe_{i,m(t)} + η_{i,t}`
//! with one common shock per month, country × month-of-year effects and iid
//! noise. Because propagation is linear in the impact, the response to a unit
//! tightening is `θ⁺ρʰ` and the response to a unit easing is `−θ⁻ρʰ`.

mod montecarlo;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, Normal, StudentT};
use serde::{Deserialize, Serialize};

use crate::calendar::{Month, MonthRange};
use crate::error::{Error, Result};
use crate::panel::{Observation, PanelDataset, Role, SeriesKey, Transform, VariableDecl};
use crate::shock::{ShockMethod, ShockSeries, ShockUnits};

pub use montecarlo::{replication_seed, run_replications, McSummary};

/// Months simulated and discarded before the first recorded month.
pub const BURN_IN: usize = 100;

/// Name of the simulated outcome variable.
pub const OUTCOME: &str = "y";

const STREAM_SHOCK: u64 = 0;
const STREAM_FE: u64 = 1;
const STREAM_NOISE: u64 = 2;
const STREAM_MASK: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShockDistribution {
    Gaussian { scale: f64 },
    /// Student-t with `df` degrees of freedom, multiplied by `scale`.
    StudentT { df: f64, scale: f64 },
}

impl ShockDistribution {
    fn scale(&self) -> f64 {
        match *self {
            ShockDistribution::Gaussian { scale } | ShockDistribution::StudentT { scale, .. } => scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DgpConfig {
    pub countries: usize,
    pub months: usize,
    pub rho: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub shock_dist: ShockDistribution,
    pub fe_magnitude: f64,
    pub noise_scale: f64,
    pub missing_rate: f64,
    pub seed: u64,
    pub start: Month,
}

impl Default for DgpConfig {
    fn default() -> Self {
        Self {
            countries: 20,
            months: 240,
            rho: 0.9,
            theta_plus: 1.0,
            theta_minus: 1.0,
            shock_dist: ShockDistribution::Gaussian { scale: 1.0 },
            fe_magnitude: 1.0,
            noise_scale: 1.0,
            missing_rate: 0.0,
            seed: 0,
            start: Month::new(2000, 1).expect("valid month"),
        }
    }
}

impl DgpConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.countries == 0 || self.months == 0 {
            return bad("countries and months must be positive".into());
        }
        if !(0.0..1.0).contains(&self.rho) {
            return bad(format!("rho {} outside [0, 1)", self.rho));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return bad(format!("missing rate {} outside [0, 1)", self.missing_rate));
        }
        if !self.theta_plus.is_finite() || !self.theta_minus.is_finite() {
            return bad("loadings must be finite".into());
        }
        for (name, v) in [
            ("shock scale", self.shock_dist.scale()),
            ("fe magnitude", self.fe_magnitude),
            ("noise scale", self.noise_scale),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} {v} must be a finite non-negative number"));
            }
        }
        if let ShockDistribution::StudentT { df, .. } = self.shock_dist {
            if !(df > 0.0 && df.is_finite()) {
                return bad(format!("degrees of freedom {df} must be positive"));
            }
        }
        let last = self.start.index() as i64 + self.months as i64 - 1;
        if Month::from_index(last as i32).is_err() || last > i32::MAX as i64 {
            return bad("simulated calendar runs past the supported range".into());
        }
        Ok(())
    }

    pub fn range(&self) -> MonthRange {
        MonthRange::new(self.start, self.start.offset(self.months as i32 - 1)).expect("validated")
    }

    pub fn country_name(i: usize) -> String {
        format!("C{:03}", i + 1)
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Common shocks for the burn-in and recorded months.
    pub fn draw_shocks(&self) -> Vec<f64> {
        let mut rng = self.rng(STREAM_SHOCK);
        let n = BURN_IN + self.months;
        match self.shock_dist {
            ShockDistribution::Gaussian { scale } => {
                let d = Normal::new(0.0, 1.0).expect("unit normal");
                (0..n).map(|_| scale * d.sample(&mut rng)).collect()
            }
            ShockDistribution::StudentT { df, scale } => {
                let d = StudentT::new(df).expect("validated df");
                (0..n).map(|_| scale * d.sample(&mut rng)).collect()
            }
        }
    }

    /// `deleted[i * months + t]` is true when `(country i, month t)` is
    /// dropped from the recorded panel.
    pub fn deletion_mask(&self) -> Vec<bool> {
        let mut rng = self.rng(STREAM_MASK);
        let n = self.countries * self.months;
        if self.missing_rate == 0.0 {
            return vec![false; n];
        }
        let d = Bernoulli::new(self.missing_rate).expect("validated rate");
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }
}

/// True responses over `0..=H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleIrf {
    pub rho: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub horizons: usize,
}

impl OracleIrf {
    /// Response to `ε = +1`: `θ⁺ρʰ`.
    pub fn irf_plus(&self, h: usize) -> f64 {
        self.theta_plus * self.rho.powi(h as i32)
    }

    /// Response to `ε = −1`: `−θ⁻ρʰ`.
    pub fn irf_minus(&self, h: usize) -> f64 {
        -self.loading_minus(h)
    }

    /// Propagated easing loading `θ⁻ρʰ`, the slope on `min(ε, 0)`.
    pub fn loading_minus(&self, h: usize) -> f64 {
        self.theta_minus * self.rho.powi(h as i32)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["h", "irf_plus_true", "irf_minus_true"])?;
        for h in 0..=self.horizons {
            w.write_record([
                h.to_string(),
                self.irf_plus(h).to_string(),
                self.irf_minus(h).to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<oracle csv>", e))?;
        Ok(())
    }
}

pub fn oracle_irf(cfg: &DgpConfig, horizons: usize) -> OracleIrf {
    OracleIrf {
        rho: cfg.rho,
        theta_plus: cfg.theta_plus,
        theta_minus: cfg.theta_minus,
        horizons,
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub panel: PanelDataset,
    pub shock: ShockSeries,
    pub oracle: OracleIrf,
    /// Rows before and after deletion.
    pub full_rows: usize,
    pub kept_rows: usize,
}

/// Draws one panel. Shocks, effects, noise and the deletion mask use
/// separate streams of the seeded generator, so each is reproducible alone.
pub fn simulate(cfg: &DgpConfig, horizons: usize) -> Result<Simulation> {
    cfg.validate()?;
    let shocks = cfg.draw_shocks();
    let mask = cfg.deletion_mask();
    let unit = Normal::new(0.0, 1.0).expect("unit normal");

    let mut fe_rng = cfg.rng(STREAM_FE);
    let fe: Vec<f64> = (0..cfg.countries * 12)
        .map(|_| cfg.fe_magnitude * unit.sample(&mut fe_rng))
        .collect();

    let mut panel = PanelDataset::new(vec![VariableDecl::new(OUTCOME, Transform::None, Role::Outcome)])?;
    let mut noise_rng = cfg.rng(STREAM_NOISE);
    let first = cfg.start.offset(-(BURN_IN as i32));
    let total = BURN_IN + cfg.months;
    let mut kept = 0;
    for i in 0..cfg.countries {
        let key = SeriesKey::new(DgpConfig::country_name(i), OUTCOME)?;
        let mut y = 0.0;
        for (s, &eps) in shocks.iter().enumerate().take(total) {
            let m = first.offset(s as i32);
            let impact = cfg.theta_plus * eps.max(0.0) + cfg.theta_minus * eps.min(0.0);
            let eta = cfg.noise_scale * unit.sample(&mut noise_rng);
            y = cfg.rho * y + impact + fe[i * 12 + m.month_of_year() as usize - 1] + eta;
            if s >= BURN_IN && !mask[i * cfg.months + s - BURN_IN] {
                panel.insert(Observation {
                    key: key.clone(),
                    date: m,
                    value: y,
                })?;
                kept += 1;
            }
        }
    }

    let mut shock = ShockSeries::new(ShockMethod::External, ShockUnits::StandardDeviation);
    for (s, &eps) in shocks.iter().enumerate().skip(BURN_IN) {
        shock.insert(first.offset(s as i32), eps)?;
    }
    Ok(Simulation {
        panel,
        shock,
        oracle: oracle_irf(cfg, horizons),
        full_rows: cfg.countries * cfg.months,
        kept_rows: kept,
    })
}
