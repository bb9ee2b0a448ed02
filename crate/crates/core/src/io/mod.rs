//! Data ingestion, rolling-window driver and report emission.

pub mod prices;
pub mod report;
pub mod rolling;

pub use prices::{
    load_price_csv, loss_dates, losses_from_prices, read_price_csv, weekly_resample, write_price_csv,
    PriceSeries,
};
pub use report::{Cell, OutputFormat, Table};
pub use rolling::{rolling_estimates, rolling_row_count, RollingConfig, RollingRow};

use std::path::Path;

use crate::error::{Error, Result};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Reads named numeric columns from a CSV with a header row.
pub fn read_columns(path: impl AsRef<Path>, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let source = path.display().to_string();
    let data_err = |line: u64, message: String| Error::Data {
        path: source.clone(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{source}: {e}")))?;
    let headers = rdr
        .headers()
        .map_err(|e| data_err(1, e.to_string()))?
        .clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == *name)
                .ok_or_else(|| data_err(1, format!("no column named `{name}`")))
        })
        .collect::<Result<_>>()?;
    let mut out = vec![Vec::new(); names.len()];
    for (row, record) in rdr.records().enumerate() {
        let line = row as u64 + 2;
        let record = record.map_err(|e| data_err(line, e.to_string()))?;
        for ((&i, name), col) in idx.iter().zip(names).zip(out.iter_mut()) {
            let raw = record.get(i).unwrap_or("");
            let v: f64 = raw
                .parse()
                .map_err(|_| data_err(line, format!("`{name}` value `{raw}` is not a number")))?;
            col.push(v);
        }
    }
    Ok(out)
}
