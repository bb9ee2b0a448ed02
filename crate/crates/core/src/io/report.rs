//! Tabular reports, emitted as CSV or JSON.
//!
//! Both formats carry the same cells: numbers use 17 significant digits,
//! missing values are an empty CSV field or JSON `null`, and JSON output is an
//! array of objects keyed by column name. Every report carries its run
//! configuration (and seed) as ordinary columns on each row.

use std::io::Write;
use std::str::FromStr;

use chrono::NaiveDate;
use serde_json::{Map, Number, Value};

use super::format_number;
use super::rolling::{RollingConfig, RollingRow};
use crate::covar::{Estimates, ESTIMATOR_NAMES};
use crate::error::{Error, Result};
use crate::sample::TailConfig;
use crate::simulation::{GridResult, ModelSpec, MsreReport, TruthValues};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl Cell {
    fn from_result(r: &Result<f64>) -> Cell {
        r.as_ref().map_or(Cell::Missing, |v| Cell::Num(*v))
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format_number(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Num(_) | Cell::Missing => String::new(),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => {
                Number::from_str(&format_number(*v)).map_or(Value::Null, Value::Number)
            }
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(_) | Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Prepends constant columns to every row.
    pub fn with_meta(mut self, meta: &[(&str, Cell)]) -> Self {
        let mut columns: Vec<String> = meta.iter().map(|(k, _)| k.to_string()).collect();
        columns.append(&mut self.columns);
        self.columns = columns;
        for row in &mut self.rows {
            let mut full: Vec<Cell> = meta.iter().map(|(_, v)| v.clone()).collect();
            full.append(row);
            *row = full;
        }
        self
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json_value))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write<W: Write>(&self, mut writer: W, format: OutputFormat) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(writer),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut writer, &self.to_json())
                    .map_err(|e| Error::Io(e.to_string()))?;
                writeln!(writer)?;
                Ok(())
            }
        }
    }
}

pub fn model_meta(model: &ModelSpec) -> Vec<(&'static str, Cell)> {
    match *model {
        ModelSpec::MarshallOlkinPareto { a, a1, a2 } => vec![
            ("model", "mo".into()),
            ("a", a.into()),
            ("a1", a1.into()),
            ("a2", a2.into()),
            ("b", Cell::Missing),
        ],
        ModelSpec::ParetoMixture { a, b } => vec![
            ("model", "mix".into()),
            ("a", a.into()),
            ("a1", Cell::Missing),
            ("a2", Cell::Missing),
            ("b", b.into()),
        ],
    }
}

pub fn tail_meta(tail: &TailConfig) -> Vec<(&'static str, Cell)> {
    vec![
        ("k", tail.k.into()),
        ("k1", tail.k1.into()),
        ("k2", tail.k2.into()),
        ("tau_prime", tail.tau_prime.into()),
    ]
}

const ESTIMATE_COLUMNS: [&str; 15] = [
    "gamma1_hat",
    "eta_hat",
    "xi_hat",
    "var_x_int",
    "var_y_int",
    "covar_int",
    "coes_int",
    "threshold_count",
    "covar_i",
    "covar_ii",
    "coes_i",
    "coes_ii",
    "coes_iii",
    "errors",
    "diagnostics",
];

fn estimate_cells(est: &Estimates) -> Vec<Cell> {
    let evt = &est.evt;
    let int = &est.intermediate;
    let ex = &est.extrapolations;
    let mut errors = Vec::new();
    for (name, r) in [
        ("gamma1_hat", &evt.gamma1_hat),
        ("eta_hat", &evt.eta_hat),
        ("xi_hat", &evt.xi_hat),
        ("covar_int", &int.covar_int),
        ("coes_int", &int.coes_int),
    ]
    .into_iter()
    .chain(ESTIMATOR_NAMES.into_iter().zip(ex.results()))
    {
        if let Err(e) = r {
            errors.push(format!("{name}: {e}"));
        }
    }
    let diagnostics: Vec<String> = ex.diagnostics.iter().map(ToString::to_string).collect();
    let mut cells = vec![
        Cell::from_result(&evt.gamma1_hat),
        Cell::from_result(&evt.eta_hat),
        Cell::from_result(&evt.xi_hat),
        evt.var_x_int.into(),
        evt.var_y_int.into(),
        Cell::from_result(&int.covar_int),
        Cell::from_result(&int.coes_int),
        int.threshold_count.into(),
    ];
    cells.extend(ex.results().into_iter().map(Cell::from_result));
    cells.push(errors.join("; ").into());
    cells.push(diagnostics.join("; ").into());
    cells
}

/// One-row report of a static estimate.
pub fn estimate_table(est: &Estimates, n: usize, tail: &TailConfig, seed: u64) -> Table {
    let mut t = Table::new(ESTIMATE_COLUMNS);
    t.push(estimate_cells(est));
    let mut meta = vec![("seed", seed.into()), ("n", n.into())];
    meta.extend(tail_meta(tail));
    t.with_meta(&meta)
}

/// One row per window; `dates[i]` labels observation `i` when given.
pub fn rolling_table(rows: &[RollingRow], dates: Option<&[NaiveDate]>, rc: &RollingConfig, seed: u64) -> Table {
    let mut columns = vec!["end", "date"];
    columns.extend(ESTIMATE_COLUMNS);
    let mut t = Table::new(columns);
    for row in rows {
        let date = dates
            .and_then(|d| d.get(row.end - 1))
            .map_or(Cell::Missing, |d| d.format("%Y-%m-%d").to_string().into());
        let mut cells = vec![row.end.into(), date];
        match &row.estimates {
            Ok(est) => cells.extend(estimate_cells(est)),
            Err(e) => {
                cells.extend(std::iter::repeat_n(Cell::Missing, ESTIMATE_COLUMNS.len() - 2));
                cells.push(format!("window: {e}").into());
                cells.push(Cell::Text(String::new()));
            }
        }
        t.push(cells);
    }
    let mut meta = vec![
        ("seed", seed.into()),
        ("window", rc.window.into()),
        ("step", rc.step.into()),
    ];
    meta.extend(tail_meta(&rc.tail));
    t.with_meta(&meta)
}

fn run_meta(config: &crate::simulation::RunConfig) -> Vec<(&'static str, Cell)> {
    let mut meta = model_meta(&config.model);
    meta.push(("n", config.n.into()));
    meta.extend(tail_meta(&config.tail));
    meta.push(("replications", config.replications.into()));
    meta.push(("seed", config.seed.into()));
    meta
}

/// One row per estimator.
pub fn msre_table(reports: &[MsreReport]) -> Table {
    let mut t = Table::new([
        "estimator",
        "truth",
        "msre",
        "successes",
        "failures",
        "median_ratio",
        "iqr_ratio",
    ]);
    for r in reports {
        t.push(vec![
            r.estimator.as_str().into(),
            r.truth.into(),
            r.msre.into(),
            r.successes().into(),
            r.failures.len().into(),
            r.median_ratio().into(),
            r.interquartile_range().into(),
        ]);
    }
    match reports.first() {
        Some(r) => t.with_meta(&run_meta(&r.config)),
        None => t,
    }
}

/// Long-format `estimate/truth` ratios for boxplots, with failed
/// replications listed by their error.
pub fn ratios_table(reports: &[MsreReport]) -> Table {
    let mut t = Table::new(["estimator", "replication", "ratio", "error"]);
    for r in reports {
        let mut ok = r.ratios.iter();
        let mut failed = r.failures.iter().peekable();
        for rep in 0..r.config.replications {
            if failed.peek().is_some_and(|f| f.replication == rep) {
                let f = failed.next().expect("peeked");
                t.push(vec![
                    r.estimator.as_str().into(),
                    rep.into(),
                    Cell::Missing,
                    f.error.to_string().into(),
                ]);
            } else if let Some(q) = ok.next() {
                t.push(vec![
                    r.estimator.as_str().into(),
                    rep.into(),
                    (*q).into(),
                    Cell::Text(String::new()),
                ]);
            }
        }
    }
    match reports.first() {
        Some(r) => t.with_meta(&run_meta(&r.config)),
        None => t,
    }
}

pub fn grid_table(result: &GridResult, model: &ModelSpec) -> Table {
    let mut t = Table::new(["k", "k1", "k2", "msre_covar_i", "failures", "best"]);
    let best = result.best.as_ref().map(|b| (b.k, b.k1));
    for c in &result.surface {
        t.push(vec![
            c.k.into(),
            c.k1.into(),
            c.k1.into(),
            c.msre.into(),
            c.failures.into(),
            usize::from(best == Some((c.k, c.k1))).into(),
        ]);
    }
    let mut meta = model_meta(model);
    meta.extend([
        ("n", result.n.into()),
        ("tau_prime", result.tau_prime.into()),
        ("replications", result.replications.into()),
        ("seed", result.seed.into()),
    ]);
    t.with_meta(&meta)
}

pub fn truth_table(model: &ModelSpec, truth: &TruthValues) -> Table {
    let mut t = Table::new(["tau", "var_y", "covar", "coes", "gamma1", "eta"]);
    t.push(vec![
        truth.tau.into(),
        truth.var_y.into(),
        truth.covar.into(),
        truth.coes.into(),
        truth.gamma1.into(),
        truth.eta.into(),
    ]);
    t.with_meta(&model_meta(model))
}

/// `(k, estimate)` curve for threshold selection plots.
pub fn sweep_table(name: &str, points: &[(usize, Result<f64>)]) -> Table {
    let mut t = Table::new(["k", name, "error"]);
    for (k, r) in points {
        let err = r.as_ref().err().map(ToString::to_string).unwrap_or_default();
        t.push(vec![(*k).into(), Cell::from_result(r), err.into()]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_carry_identical_values() {
        let mut t = Table::new(["a", "b", "c", "d"]);
        t.push(vec![
            0.1f64.into(),
            Cell::Missing,
            "x,y".into(),
            7usize.into(),
        ]);
        t.push(vec![
            (1.0f64 / 3.0).into(),
            f64::NAN.into(),
            "".into(),
            0usize.into(),
        ]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let csv_rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        let json = t.to_json();
        for (row, obj) in csv_rows.iter().zip(json.as_array().unwrap()) {
            let a: f64 = row[0].parse().unwrap();
            assert_eq!(Some(a), obj["a"].as_f64());
            assert!(row[1].is_empty() && obj["b"].is_null());
            assert_eq!(&row[2], obj["c"].as_str().unwrap());
        }
        assert_eq!(json[1]["a"].as_f64(), Some(1.0 / 3.0));
    }

    #[test]
    fn meta_columns_prepend() {
        let mut t = Table::new(["v"]);
        t.push(vec![1.0f64.into()]);
        let t = t.with_meta(&[("seed", 3usize.into())]);
        assert_eq!(t.columns, vec!["seed", "v"]);
        assert_eq!(t.rows[0][0], Cell::Int(3));
    }
}
