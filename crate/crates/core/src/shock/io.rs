use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{EventSurprise, ShockMethod, ShockSeries, ShockUnits};
use crate::calendar::Month;
use crate::error::{Error, Result};

/// Metadata written next to a shock CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockSidecar {
    pub method: ShockMethod,
    pub units: ShockUnits,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub report: serde_json::Value,
}

/// Reads `date,stock_surprise,rate_m1,rate_m2,...`. Every column after the
/// first two is a rate surprise.
pub fn read_events<R: Read>(reader: R) -> Result<Vec<EventSurprise<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.get(0) != Some("date") || headers.get(1) != Some("stock_surprise") {
        return Err(Error::Schema(
            "event file must start with columns `date,stock_surprise`".into(),
        ));
    }
    if headers.len() < 3 {
        return Err(Error::Schema("event file has no rate surprise columns".into()));
    }
    let num = |s: &str, what: &str, date: &str| -> Result<f64> {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Schema(format!("bad {what} `{s}` on {date}")))
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let ds = rec.get(0).unwrap_or("");
        let date = NaiveDate::parse_from_str(ds, "%Y-%m-%d")
            .map_err(|e| Error::Schema(format!("bad event date `{ds}`: {e}")))?;
        let stock = num(rec.get(1).unwrap_or(""), "stock surprise", ds)?;
        let rates = (2..headers.len())
            .map(|i| num(rec.get(i).unwrap_or(""), &headers[i], ds))
            .collect::<Result<Vec<_>>>()?;
        let ev = EventSurprise::new(date, rates, stock)?;
        ev.month()?;
        out.push(ev);
    }
    Ok(out)
}

pub fn write_shock_csv<W: Write>(series: &ShockSeries, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "shock"])?;
    for (m, v) in series.entries() {
        w.write_record([m.to_string(), v.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<shock csv>", e))?;
    Ok(())
}

/// Path of the metadata file for a shock CSV: same stem, `.json` extension.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

/// Reads `date,shock` (dates `YYYY-MM`). Method and units come from the
/// sidecar when present; otherwise the series is treated as externally
/// supplied with the given units.
pub fn read_shock_csv(path: &Path, default_units: ShockUnits) -> Result<ShockSeries> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let sidecar_path = sidecar_path(path);
    let (method, units) = if sidecar_path.exists() {
        let text = std::fs::read_to_string(&sidecar_path).map_err(|e| Error::io(&sidecar_path, e))?;
        let meta: ShockSidecar = serde_json::from_str(&text)
            .map_err(|e| Error::Schema(format!("{}: {e}", sidecar_path.display())))?;
        (meta.method, meta.units)
    } else {
        (ShockMethod::External, default_units)
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("shock file missing column `{name}`")))
    };
    let (di, si) = (col("date")?, col("shock")?);
    let mut series = ShockSeries::new(method, units);
    for rec in rdr.records() {
        let rec = rec?;
        let m: Month = rec.get(di).unwrap_or("").parse()?;
        let raw = rec.get(si).unwrap_or("");
        let v: f64 = raw
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::Schema(format!("bad shock value `{raw}` at {m}")))?;
        series.insert(m, v)?;
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_event_file() {
        let text = "date,stock_surprise,rate_m1,rate_m2\n2010-06-03,-0.3,0.05,0.04\n2010-06-24,0.1,-0.01,0.0\n";
        let ev = read_events(text.as_bytes()).unwrap();
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].rate_surprises, vec![0.05, 0.04]);
        assert_eq!(ev[1].stock_surprise, 0.1);
    }

    #[test]
    fn rejects_wrong_header_and_bad_values() {
        assert!(read_events("stock_surprise,date,r\n".as_bytes()).is_err());
        assert!(read_events("date,stock_surprise\n2010-01-01,0.1\n".as_bytes()).is_err());
        assert!(read_events("date,stock_surprise,r\n2010-01-01,x,0.1\n".as_bytes()).is_err());
        assert!(read_events("date,stock_surprise,r\n2010-13-01,0.1,0.1\n".as_bytes()).is_err());
    }

    #[test]
    fn shock_csv_roundtrip_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("shock.csv");
        let s = ShockSeries::from_entries(
            [("2010-06".parse().unwrap(), 0.06), ("2010-07".parse().unwrap(), -0.1 / 3.0)],
            ShockMethod::PoorMan,
            ShockUnits::PercentagePoint,
        )
        .unwrap();
        write_shock_csv(&s, File::create(&path).unwrap()).unwrap();
        let plain = read_shock_csv(&path, ShockUnits::StandardDeviation).unwrap();
        assert_eq!(plain.method, ShockMethod::External);
        assert_eq!(plain.entries(), s.entries());

        let meta = ShockSidecar {
            method: ShockMethod::PoorMan,
            units: ShockUnits::PercentagePoint,
            report: serde_json::Value::Null,
        };
        std::fs::write(path.with_extension("json"), serde_json::to_string(&meta).unwrap()).unwrap();
        let back = read_shock_csv(&path, ShockUnits::StandardDeviation).unwrap();
        assert_eq!(back, s);
    }
}
