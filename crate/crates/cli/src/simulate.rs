use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use signlp::panel::write_panel_csv;
use signlp::shock::{write_shock_csv, ShockSidecar};
use signlp::sim::{simulate, DgpConfig, ShockDistribution};
use signlp::Month;

use crate::error::CliError;
use crate::output::OutputDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dist {
    Gaussian,
    StudentT,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 20)]
    pub countries: usize,
    #[arg(long, default_value_t = 240)]
    pub months: usize,
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,
    /// Impact of a positive shock.
    #[arg(long, default_value_t = 1.0)]
    pub theta_plus: f64,
    /// Slope on the negative part of the shock.
    #[arg(long, default_value_t = 1.0)]
    pub theta_minus: f64,
    /// Sets the negative slope equal to the positive one.
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
    pub shock_dist: Dist,
    /// Degrees of freedom for `student-t` shocks.
    #[arg(long, default_value_t = 5.0)]
    pub df: f64,
    #[arg(long, default_value_t = 1.0)]
    pub shock_scale: f64,
    #[arg(long, default_value_t = 1.0)]
    pub fe_magnitude: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_scale: f64,
    /// Probability that a country-month is deleted.
    #[arg(long, default_value_t = 0.0)]
    pub missing_rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Horizons written to the oracle file.
    #[arg(long, default_value_t = 24)]
    pub horizons: usize,
    #[arg(long, default_value = "2000-01")]
    pub start: Month,
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: PathBuf,
}

impl SimulateArgs {
    pub fn dgp(&self) -> DgpConfig {
        let shock_dist = match self.shock_dist {
            Dist::Gaussian => ShockDistribution::Gaussian {
                scale: self.shock_scale,
            },
            Dist::StudentT => ShockDistribution::StudentT {
                df: self.df,
                scale: self.shock_scale,
            },
        };
        DgpConfig {
            countries: self.countries,
            months: self.months,
            rho: self.rho,
            theta_plus: self.theta_plus,
            theta_minus: if self.symmetric { self.theta_plus } else { self.theta_minus },
            shock_dist,
            fe_magnitude: self.fe_magnitude,
            noise_scale: self.noise_scale,
            missing_rate: self.missing_rate,
            seed: self.seed,
            start: self.start,
        }
    }
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let cfg = args.dgp();
    let sim = simulate(&cfg, args.horizons)?;
    let mut out = OutputDir::create(&args.out_dir)?;

    let mut buf = Vec::new();
    write_panel_csv(&sim.panel, &mut buf)?;
    out.write("panel.csv", &buf)?;
    out.write_json("schema.json", &sim.panel.declarations())?;

    buf.clear();
    write_shock_csv(&sim.shock, &mut buf)?;
    out.write("shock.csv", &buf)?;
    out.write_json(
        "shock.json",
        &ShockSidecar {
            method: sim.shock.method,
            units: sim.shock.units,
            report: serde_json::Value::Null,
        },
    )?;

    buf.clear();
    sim.oracle.write_csv(&mut buf)?;
    out.write("oracle.csv", &buf)?;
    out.write_json(
        "config.json",
        &serde_json::json!({
            "dgp": cfg,
            "horizons": args.horizons,
            "full_rows": sim.full_rows,
            "kept_rows": sim.kept_rows,
        }),
    )?;

    let config = serde_json::to_value(args)?;
    out.finish("simulate", &config, &[], &[])?;
    println!("{} of {} rows kept", sim.kept_rows, sim.full_rows);
    Ok(())
}
