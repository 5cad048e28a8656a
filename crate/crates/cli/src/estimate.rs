use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use signlp::engine::LocalProjection;
use signlp::irf::{
    assemble_irfs, estimate_horizons, test_asymmetry, write_irf_csv, ClusterBy, EasingConvention, Family,
    IrfHorizon, LpSpecification,
};
use signlp::panel::{load_panel, load_schema, PanelDataset};
use signlp::shock::{read_shock_csv, sidecar_path, ShockSeries, ShockUnits};
use signlp::{HorizonFit64, Month, MonthRange};

use crate::error::CliError;
use crate::output::{FileHash, HorizonRecord, OutputDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Easing {
    Response,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cluster {
    Date,
}

/// `COUNTRY=YYYY-MM..YYYY-MM`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryWindow {
    pub country: String,
    pub range: MonthRange,
}

fn parse_window(s: &str) -> Result<CountryWindow, String> {
    let (country, span) = s.split_once('=').ok_or("expected COUNTRY=START..END")?;
    let (a, b) = span.split_once("..").ok_or("expected START..END")?;
    let start: Month = a.parse().map_err(|e: signlp::Error| e.to_string())?;
    let end: Month = b.parse().map_err(|e: signlp::Error| e.to_string())?;
    let range = MonthRange::new(start, end).map_err(|e| e.to_string())?;
    Ok(CountryWindow {
        country: country.to_owned(),
        range,
    })
}

/// Panel, shock and sample restrictions shared by `estimate` and `check`.
#[derive(Debug, Args, Serialize)]
pub struct DataArgs {
    /// Long-format panel CSV: `country,date,variable,value`.
    #[arg(long)]
    pub panel: PathBuf,
    /// JSON array of variable declarations.
    #[arg(long)]
    pub schema: PathBuf,
    /// Monthly shock CSV `date,shock`, with an optional `.json` sidecar.
    #[arg(long)]
    pub shock: PathBuf,
    /// Units assumed when the shock has no sidecar.
    #[arg(long, default_value = "standard-deviation")]
    pub shock_units: ShockUnits,
    /// Keep only these countries (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub countries: Vec<String>,
    /// Restrict one country to a window, e.g. `DE=1999-01..2019-12`.
    #[arg(long, value_parser = parse_window)]
    pub country_window: Vec<CountryWindow>,
    #[arg(long)]
    pub start_date: Option<Month>,
    #[arg(long)]
    pub end_date: Option<Month>,
}

pub struct Inputs {
    pub panel: PanelDataset,
    pub shock: ShockSeries,
    pub files: Vec<FileHash>,
}

impl DataArgs {
    /// Loads and transforms the panel, then applies the sample filters.
    pub fn load(&self) -> Result<Inputs, CliError> {
        let schema = load_schema(&self.schema)?;
        let (panel, _) = load_panel(&self.panel, schema)?;
        let mut panel = panel.apply_all_transforms()?;
        if !self.countries.is_empty() {
            panel = panel.restrict_countries(&self.countries);
        }
        if self.start_date.is_some() || self.end_date.is_some() {
            if let Some(span) = panel.date_range() {
                let range = MonthRange::new(
                    self.start_date.unwrap_or(span.start).max(span.start),
                    self.end_date.unwrap_or(span.end).min(span.end),
                )
                .map_err(|_| CliError::Config("date window excludes the whole panel".into()))?;
                panel = panel.with_date_range(range);
            }
        }
        for w in &self.country_window {
            panel = panel.with_country_filter(&w.country, w.range);
        }
        let shock = read_shock_csv(&self.shock, self.shock_units)?;
        let mut files = vec![
            FileHash::of_file(&self.panel)?,
            FileHash::of_file(&self.schema)?,
            FileHash::of_file(&self.shock)?,
        ];
        let sidecar = sidecar_path(&self.shock);
        if sidecar.exists() {
            files.push(FileHash::of_file(&sidecar)?);
        }
        Ok(Inputs { panel, shock, files })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Outcome variables (comma separated); one response file each.
    #[arg(long, required = true, value_delimiter = ',')]
    pub outcome: Vec<String>,
    /// Additional lagged controls (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub controls: Vec<String>,
    /// Leave out lags of the outcome itself.
    #[arg(long)]
    pub no_own_lags: bool,
    #[arg(long, default_value = "abs-sign")]
    pub family: Family,
    #[arg(long, default_value_t = 4)]
    pub lags: usize,
    /// Maximum horizon in months.
    #[arg(long, default_value_t = 24)]
    pub horizons: usize,
    /// Drop the country × calendar-month fixed effects.
    #[arg(long)]
    pub no_fe: bool,
    #[arg(long, value_enum, default_value_t = Cluster::Date)]
    pub cluster: Cluster,
    /// Confidence levels of the reported bands.
    #[arg(long, value_delimiter = ',', default_value = "0.68,0.90")]
    pub bands: Vec<f64>,
    /// `response` reports the easing column as the response to a shock of
    /// −1; `raw` reports the slope on the negative part.
    #[arg(long, value_enum, default_value_t = Easing::Response)]
    pub easing: Easing,
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: PathBuf,
}

impl EstimateArgs {
    pub fn spec(&self, outcome: &str) -> LpSpecification {
        let mut controls = Vec::new();
        if !self.no_own_lags {
            controls.push(outcome.to_owned());
        }
        controls.extend(self.controls.iter().filter(|c| c.as_str() != outcome).cloned());
        LpSpecification {
            family: self.family,
            outcome: outcome.to_owned(),
            controls,
            lags: self.lags,
            fe_enabled: !self.no_fe,
            horizons: self.horizons,
            band_levels: self.bands.clone(),
            cluster: match self.cluster {
                Cluster::Date => ClusterBy::Date,
            },
            easing: match self.easing {
                Easing::Response => EasingConvention::Response,
                Easing::Raw => EasingConvention::Raw,
            },
        }
    }
}

fn record(outcome: &str, h: usize, fit: &signlp::Result<HorizonFit64>, irf: &IrfHorizon<f64>) -> HorizonRecord {
    let mut r = HorizonRecord {
        outcome: outcome.to_owned(),
        h,
        status: if irf.entry().is_some() { "estimated" } else { "missing" },
        n_obs: None,
        n_clusters: None,
        n_fe_groups: None,
        singletons_dropped: None,
        dropped_columns: Vec::new(),
        reason: None,
    };
    if let Ok(f) = fit {
        r.n_obs = Some(f.n_obs);
        r.n_clusters = Some(f.n_clusters);
        r.n_fe_groups = Some(f.n_fe_groups);
        r.singletons_dropped = Some(f.n_singletons_dropped);
        r.dropped_columns = f.dropped_columns.clone();
    }
    if let IrfHorizon::Missing { reason, .. } = irf {
        r.reason = Some(reason.clone());
    }
    r
}

fn fit_dump(fit: &signlp::Result<HorizonFit64>, family: Family, h: usize) -> serde_json::Value {
    match fit {
        Ok(f) => {
            let asym = (family == Family::AbsSign).then(|| match test_asymmetry(f) {
                Ok(t) => json!({"estimate": t.estimate, "se": t.se, "z": t.z, "p_value": t.p_value}),
                Err(e) => json!({"error": e.to_string()}),
            });
            json!({"h": h, "status": "estimated", "fit": f.export(), "asymmetry": asym})
        }
        Err(e) => json!({"h": h, "status": "failed", "reason": e.to_string()}),
    }
}

pub fn run(args: &EstimateArgs) -> Result<(), CliError> {
    let inputs = args.data.load()?;
    let mut out = OutputDir::create(&args.out_dir)?;
    let mut samples = Vec::new();
    let mut any = false;

    for outcome in &args.outcome {
        let spec = args.spec(outcome);
        let lp = LocalProjection::new(&inputs.panel, &inputs.shock, &spec)?;
        let fits = estimate_horizons::<f64>(&lp, spec.family, spec.horizons);
        let mut set = assemble_irfs(&spec, &fits, inputs.shock.units.to_string());
        if spec.family != Family::Linear {
            set.attach_linear(&estimate_horizons::<f64>(&lp, Family::Linear, spec.horizons));
        }
        for (h, (fit, irf)) in fits.iter().zip(&set.horizons).enumerate() {
            any |= irf.entry().is_some();
            samples.push(record(outcome, h, fit, irf));
        }

        let mut buf = Vec::new();
        write_irf_csv(&set, &mut buf)?;
        out.write(&format!("irf_{outcome}.csv"), &buf)?;
        let dumps: Vec<_> = fits
            .iter()
            .enumerate()
            .map(|(h, f)| fit_dump(f, spec.family, h))
            .collect();
        out.write_json(
            &format!("fits_{outcome}.json"),
            &json!({"outcome": outcome, "specification": spec, "horizons": dumps}),
        )?;
    }

    let config = serde_json::to_value(args)?;
    out.finish("estimate", &config, &inputs.files, &samples)?;
    if any {
        Ok(())
    } else {
        Err(CliError::NothingEstimated)
    }
}
