use std::fs::File;
use std::path::PathBuf;

use clap::Args;

use signlp::engine::LocalProjection;
use signlp::irf::{assemble_irfs, estimate_horizons, Family, IrfSet, LpSpecification};
use signlp::panel::{load_panel, load_schema, read_panel, write_panel_csv, PanelDataset};
use signlp::shock::{identify_rotation, read_events, DEFAULT_GRID_STEP};
use signlp::IrfSet64;

use crate::error::CliError;
use crate::estimate::DataArgs;

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub outcome: String,
    #[arg(long, default_value_t = 4)]
    pub lags: usize,
    #[arg(long, default_value_t = 6)]
    pub horizons: usize,
    /// Event CSV; adds the rotation covariance check.
    #[arg(long)]
    pub events: Option<PathBuf>,
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        let status = if pass { "PASS" } else { "FAIL" };
        if detail.is_empty() {
            println!("{status} {name}");
        } else {
            println!("{status} {name}: {detail}");
        }
    }
}

fn snapshot(ds: &PanelDataset) -> Vec<(String, String, i32, u64)> {
    ds.observations()
        .map(|o| (o.key.country, o.key.variable, o.date.index(), o.value.to_bits()))
        .collect()
}

fn irfs(lp: &LocalProjection, spec: &LpSpecification, family: Family) -> IrfSet64 {
    let spec = LpSpecification {
        family,
        ..spec.clone()
    };
    assemble_irfs(&spec, &estimate_horizons::<f64>(lp, family, spec.horizons), "")
}

/// Largest absolute difference over horizons estimated in both sets, and the
/// number of such horizons.
fn max_gap(a: &IrfSet<f64>, b: &IrfSet<f64>) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (x, y) in a.horizons.iter().zip(&b.horizons) {
        if let (Some(x), Some(y)) = (x.entry(), y.entry()) {
            n += 1;
            for (u, v) in [
                (x.irf_plus, y.irf_plus),
                (x.irf_minus, y.irf_minus),
                (x.se_plus, y.se_plus),
                (x.se_minus, y.se_minus),
            ] {
                worst = worst.max((u - v).abs());
            }
        }
    }
    (worst, n)
}

pub fn run(args: &CheckArgs) -> Result<(), CliError> {
    let mut rep = Report { failures: 0 };

    let schema = load_schema(&args.data.schema)?;
    let (raw, _) = load_panel(&args.data.panel, schema.clone())?;
    let mut buf = Vec::new();
    write_panel_csv(&raw, &mut buf)?;
    let (back, _) = read_panel(buf.as_slice(), schema)?;
    rep.line(
        "panel round trip",
        snapshot(&raw) == snapshot(&back),
        format!("{} observations", raw.n_obs()),
    );

    let inputs = args.data.load()?;
    let spec = LpSpecification {
        controls: vec![args.outcome.clone()],
        lags: args.lags,
        horizons: args.horizons,
        ..LpSpecification::new(Family::AbsSign, args.outcome.clone())
    };
    let lp = LocalProjection::new(&inputs.panel, &inputs.shock, &spec)?;

    let abs = irfs(&lp, &spec, Family::AbsSign);
    let pw = irfs(&lp, &spec, Family::Piecewise);
    let (gap, n) = max_gap(&abs, &pw);
    rep.line(
        "abs-sign equals piecewise",
        n > 0 && gap <= 1e-8,
        format!("max deviation {gap:e} over {n} horizons"),
    );

    let fits = estimate_horizons::<f64>(&lp, Family::AbsSign, args.horizons);
    let mut worst = 0.0f64;
    for (fit, irf) in fits.iter().zip(&abs.horizons) {
        if let (Ok(f), Some(e)) = (fit, irf.entry()) {
            let (a, s) = (f.coefficient("abs_shock"), f.coefficient("shock"));
            if let (Some(a), Some(s)) = (a, s) {
                worst = worst
                    .max((e.irf_plus + e.irf_minus - 2.0 * a).abs())
                    .max((e.irf_plus - e.irf_minus - 2.0 * s).abs());
            }
        }
    }
    rep.line("abs-sign identities", worst <= 1e-12, format!("max deviation {worst:e}"));

    let lin = irfs(&lp, &spec, Family::Linear);
    let flipped = lin
        .horizons
        .iter()
        .filter_map(|h| h.entry())
        .all(|e| e.irf_plus == -e.irf_minus && e.irf_linear == Some(e.irf_plus));
    rep.line("linear overlay sign flip", flipped, String::new());

    let nested = abs.horizons.iter().filter_map(|h| h.entry()).all(|e| {
        [&e.bands_plus, &e.bands_minus]
            .iter()
            .all(|b| b.windows(2).all(|w| w[1].lo <= w[0].lo && w[0].hi <= w[1].hi))
    });
    rep.line("bands nest by level", nested, String::new());

    let again = irfs(&lp, &spec, Family::AbsSign);
    rep.line("repeat estimation identical", again == abs, String::new());

    if let Some(path) = &args.events {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let events = read_events(file)?;
        let r = identify_rotation(&events, DEFAULT_GRID_STEP)?;
        let bbt = r.impact.matmul(&r.impact.transpose());
        let mut dev = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                dev = dev.max((bbt[(i, j)] - r.covariance[(i, j)]).abs());
            }
        }
        rep.line("rotation reproduces covariance", dev <= 1e-10, format!("max deviation {dev:e}"));
    }

    if rep.failures > 0 {
        Err(CliError::CheckFailed(rep.failures))
    } else {
        Ok(())
    }
}
