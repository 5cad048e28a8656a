use std::fs::File;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use signlp::shock::{
    aggregate_monthly, identify_rotation, poor_mans_classify, read_events, write_shock_csv, Classification,
    ShockMethod, ShockSidecar, ShockUnits,
};
use signlp::{EventSurprise64, Month, MonthRange};

use crate::error::CliError;
use crate::output::{FileHash, OutputDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rotation,
    PoorMan,
}

#[derive(Debug, Args, Serialize)]
pub struct IdentifyArgs {
    /// Event CSV: `date,stock_surprise,rate_1,...` with `YYYY-MM-DD` dates.
    #[arg(long)]
    pub events: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Rotation)]
    pub method: Method,
    /// Rotation grid step in degrees.
    #[arg(long, default_value_t = 0.1)]
    pub grid_deg: f64,
    /// First month kept (`YYYY-MM`).
    #[arg(long)]
    pub start_date: Option<Month>,
    /// Last month kept (`YYYY-MM`).
    #[arg(long)]
    pub end_date: Option<Month>,
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: PathBuf,
}

fn in_window(m: Month, start: Option<Month>, end: Option<Month>) -> bool {
    start.map_or(true, |s| m >= s) && end.map_or(true, |e| m <= e)
}

pub fn run(args: &IdentifyArgs) -> Result<(), CliError> {
    if !(args.grid_deg > 0.0 && args.grid_deg.is_finite()) {
        return Err(CliError::Config(format!("grid step {} must be positive", args.grid_deg)));
    }
    let file = File::open(&args.events).map_err(|e| CliError::io(&args.events, e))?;
    let mut events: Vec<EventSurprise64> = Vec::new();
    for ev in read_events(file)? {
        if in_window(ev.month()?, args.start_date, args.end_date) {
            events.push(ev);
        }
    }
    if events.is_empty() {
        return Err(CliError::Config("no events inside the requested window".into()));
    }

    let units = ShockUnits::PercentagePoint;
    let (method, factor, mp, info, report, classes) = match args.method {
        Method::Rotation => {
            let r = identify_rotation(&events, args.grid_deg.to_radians())?;
            let report = json!({
                "n_events": events.len(),
                "theta_star": r.theta_star,
                "theta_star_deg": r.theta_star.to_degrees(),
                "arc_width": r.arc_width,
                "arc_width_deg": r.arc_width.to_degrees(),
                "admissible_points": r.admissible.len(),
                "grid_step_deg": args.grid_deg,
                "impact": r.impact.to_rows(),
                "covariance": r.covariance.to_rows(),
            });
            let (mp, info): (Vec<f64>, Vec<f64>) = r.shocks.iter().copied().unzip();
            (ShockMethod::MedianRotation, r.factor, mp, info, report, None)
        }
        Method::PoorMan => {
            let r = poor_mans_classify(&events)?;
            let report = json!({
                "n_events": events.len(),
                "policy": r.count(Classification::Policy),
                "information": r.count(Classification::Information),
                "zero": r.count(Classification::Zero),
            });
            (ShockMethod::PoorMan, r.rate, r.mp, r.info, report, Some(r.classes))
        }
    };

    let dated: Vec<_> = events.iter().zip(&mp).map(|(e, &v)| (e.date, v)).collect();
    let monthly = aggregate_monthly(&dated, method, units)?;
    let span = monthly.range().expect("at least one event");
    let range = MonthRange::new(args.start_date.unwrap_or(span.start), args.end_date.unwrap_or(span.end))?;
    let monthly = monthly.densify(range);

    let mut out = OutputDir::create(&args.out_dir)?;
    let mut buf = Vec::new();
    write_shock_csv(&monthly, &mut buf)?;
    out.write("shock.csv", &buf)?;
    out.write_json(
        "shock.json",
        &ShockSidecar {
            method,
            units,
            report: report.clone(),
        },
    )?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["date", "stock_surprise", "rate_factor", "mp", "info", "class"])
        .map_err(signlp::Error::from)?;
    for (i, e) in events.iter().enumerate() {
        let class = match classes.as_ref().map(|c| c[i]) {
            Some(Classification::Policy) => "policy",
            Some(Classification::Information) => "information",
            Some(Classification::Zero) => "zero",
            None => "",
        };
        w.write_record([
            e.date.to_string(),
            e.stock_surprise.to_string(),
            factor[i].to_string(),
            mp[i].to_string(),
            info[i].to_string(),
            class.to_owned(),
        ])
        .map_err(signlp::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
    out.write("events_decomposed.csv", &bytes)?;

    let config = serde_json::to_value(args)?;
    let inputs = [FileHash::of_file(&args.events)?];
    out.finish("identify", &config, &inputs, &[])?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}
