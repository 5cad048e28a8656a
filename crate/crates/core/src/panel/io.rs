use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Observation, PanelDataset, SeriesKey, VariableDecl};
use crate::calendar::Month;
use crate::error::{Error, Result};

/// Row accounting for one panel load.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub duplicates: usize,
}

pub fn load_schema(path: &Path) -> Result<Vec<VariableDecl>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

pub fn write_schema(path: &Path, schema: &[VariableDecl]) -> Result<()> {
    let mut text = serde_json::to_string_pretty(schema)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_panel(path: &Path, schema: Vec<VariableDecl>) -> Result<(PanelDataset, LoadReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_panel(file, schema)
}

/// Parses `country,date,variable,value` CSV. Rows whose value is blank,
/// unparseable or non-finite are dropped and counted.
pub fn read_panel<R: Read>(reader: R, schema: Vec<VariableDecl>) -> Result<(PanelDataset, LoadReport)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing required column `{name}`")))
    };
    let (ci, di, vi, xi) = (col("country")?, col("date")?, col("variable")?, col("value")?);

    let mut ds = PanelDataset::new(schema)?;
    let mut report = LoadReport::default();
    for rec in rdr.records() {
        let rec = rec?;
        report.rows_read += 1;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let key = SeriesKey::new(field(ci), field(vi))?;
        let date: Month = field(di).parse()?;
        let value = match field(xi).parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => {
                report.rows_dropped += 1;
                continue;
            }
        };
        ds.insert(Observation { key, date, value })?;
    }
    Ok((ds, report))
}

/// Writes the panel in canonical order. Values use the shortest decimal
/// representation that parses back to the same `f64`.
pub fn write_panel_csv<W: Write>(ds: &PanelDataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["country", "date", "variable", "value"])?;
    for obs in ds.observations() {
        w.write_record([
            obs.key.country.as_str(),
            &obs.date.to_string(),
            obs.key.variable.as_str(),
            &obs.value.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<panel csv>", e))?;
    Ok(())
}
