//! Price CSV ingestion and the price → loss transforms.
//!
//! Input files have a header row, a `date` column (ISO-8601, `YYYY-MM-DD`)
//! and one or more named price columns.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{Datelike, NaiveDate};

use super::format_number;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub id: String,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

impl PriceSeries {
    pub fn new(id: impl Into<String>, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if dates.len() != values.len() {
            return Err(Error::Misaligned(format!(
                "{id}: {} dates but {} prices",
                dates.len(),
                values.len()
            )));
        }
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(format!(
                "{id}: dates must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter(format!("{id}: price {v} is not positive")));
        }
        Ok(Self { id, dates, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn load_price_csv(path: impl AsRef<Path>, columns: Option<&[String]>) -> Result<Vec<PriceSeries>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_price_csv(file, &path.display().to_string(), columns)
}

/// Parses price series from any reader. `source` names the input in errors.
/// With `columns = None` every non-date column is loaded.
pub fn read_price_csv<R: Read>(reader: R, source: &str, columns: Option<&[String]>) -> Result<Vec<PriceSeries>> {
    let data_err = |line: u64, message: String| Error::Data {
        path: source.to_string(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| data_err(1, format!("unreadable header: {e}")))?
        .clone();
    let date_idx = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("date"))
        .ok_or_else(|| data_err(1, "no `date` column".into()))?;

    let selected: Vec<(usize, String)> = match columns {
        Some(names) => names
            .iter()
            .map(|name| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .map(|i| (i, name.clone()))
                    .ok_or_else(|| data_err(1, format!("no column named `{name}`")))
            })
            .collect::<Result<_>>()?,
        None => headers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != date_idx)
            .map(|(i, h)| (i, h.to_string()))
            .collect(),
    };
    if selected.is_empty() {
        return Err(data_err(1, "no price columns".into()));
    }

    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); selected.len()];
    for (row, record) in rdr.records().enumerate() {
        // header is line 1
        let line = row as u64 + 2;
        let record = record.map_err(|e| data_err(line, e.to_string()))?;
        let raw_date = record
            .get(date_idx)
            .ok_or_else(|| data_err(line, "missing date".into()))?;
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|e| data_err(line, format!("bad date `{raw_date}`: {e}")))?;
        if let Some(&prev) = dates.last() {
            if date == prev {
                return Err(data_err(line, format!("duplicate date {date}")));
            }
            if date < prev {
                return Err(data_err(line, format!("date {date} comes after {prev}")));
            }
        }
        dates.push(date);
        for ((idx, name), out) in selected.iter().zip(values.iter_mut()) {
            let raw = record
                .get(*idx)
                .ok_or_else(|| data_err(line, format!("missing `{name}`")))?;
            let v: f64 = raw
                .parse()
                .map_err(|_| data_err(line, format!("`{name}` value `{raw}` is not a number")))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(data_err(line, format!("`{name}` price {raw} is not positive")));
            }
            out.push(v);
        }
    }
    selected
        .into_iter()
        .zip(values)
        .map(|((_, name), v)| PriceSeries::new(name, dates.clone(), v))
        .collect()
}

/// Writes series sharing one date index as a price CSV.
pub fn write_price_csv<W: Write>(writer: W, series: &[PriceSeries]) -> Result<()> {
    let first = series
        .first()
        .ok_or_else(|| Error::InvalidParameter("nothing to write".into()))?;
    if series.iter().any(|s| s.dates != first.dates) {
        return Err(Error::Misaligned("series do not share dates".into()));
    }
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    let header: Vec<&str> = std::iter::once("date").chain(series.iter().map(|s| s.id.as_str())).collect();
    w.write_record(&header).map_err(csv_err)?;
    for (i, d) in first.dates.iter().enumerate() {
        let row: Vec<String> = std::iter::once(d.format("%Y-%m-%d").to_string())
            .chain(series.iter().map(|s| format_number(s.values[i])))
            .collect();
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Negative log returns: `loss_t = −(ln p_t − ln p_{t−1})`.
pub fn losses_from_prices(series: &PriceSeries) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "{}: need at least 2 prices for a loss",
            series.id
        )));
    }
    Ok(series
        .values
        .windows(2)
        .map(|w| -(w[1].ln() - w[0].ln()))
        .collect())
}

/// Date of each loss from [`losses_from_prices`] (the later price's date).
pub fn loss_dates(series: &PriceSeries) -> &[NaiveDate] {
    series.dates.get(1..).unwrap_or(&[])
}

/// Keeps the last observation of each ISO week.
pub fn weekly_resample(series: &PriceSeries) -> PriceSeries {
    let mut dates = Vec::new();
    let mut values = Vec::new();
    for i in 0..series.len() {
        let week = series.dates[i].iso_week();
        let last_of_week = series
            .dates
            .get(i + 1)
            .is_none_or(|next| next.iso_week() != week);
        if last_of_week {
            dates.push(series.dates[i]);
            values.push(series.values[i]);
        }
    }
    PriceSeries {
        id: series.id.clone(),
        dates,
        values,
    }
}
