use std::io::Write;

use super::{IrfHorizon, IrfSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column tag for a coverage level: 0.68 → "68", 0.675 → "67.5".
pub fn band_label(level: f64) -> String {
    let pct = (level * 1e6).round() / 1e4;
    let s = format!("{pct}");
    s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
}

pub fn irf_csv_header(levels: &[f64]) -> Vec<String> {
    let mut h: Vec<String> = [
        "h", "irf_plus", "se_plus", "irf_minus", "se_minus", "irf_linear",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for side in ["plus", "minus"] {
        for &l in levels {
            let tag = band_label(l);
            h.push(format!("lo{tag}_{side}"));
            h.push(format!("hi{tag}_{side}"));
        }
    }
    h
}

/// One row per horizon; gaps are written as empty fields.
pub fn write_irf_csv<T: Scalar, W: Write>(set: &IrfSet<T>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header = irf_csv_header(&set.levels);
    w.write_record(&header)?;
    let num = |v: T| v.as_f64().to_string();
    for hz in &set.horizons {
        let mut rec = vec![hz.h().to_string()];
        match hz {
            IrfHorizon::Estimated(e) => {
                rec.push(num(e.irf_plus));
                rec.push(num(e.se_plus));
                rec.push(num(e.irf_minus));
                rec.push(num(e.se_minus));
                rec.push(e.irf_linear.map(num).unwrap_or_default());
                for b in e.bands_plus.iter().chain(&e.bands_minus) {
                    rec.push(num(b.lo));
                    rec.push(num(b.hi));
                }
            }
            IrfHorizon::Missing { .. } => rec.resize(header.len(), String::new()),
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<irf csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_header_matches_contract() {
        assert_eq!(
            irf_csv_header(&[0.68, 0.90]).join(","),
            "h,irf_plus,se_plus,irf_minus,se_minus,irf_linear,lo68_plus,hi68_plus,lo90_plus,hi90_plus,lo68_minus,hi68_minus,lo90_minus,hi90_minus"
        );
        assert_eq!(band_label(0.675), "67.5");
        assert_eq!(band_label(0.95), "95");
    }
}
