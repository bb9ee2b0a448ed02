use std::fs::File;
use std::io::Write;

use chrono::NaiveDate;

use tailcovar::evt::{eta_sweep, hill_sweep};
use tailcovar::io::report::{
    estimate_table, grid_table, model_meta, msre_table, ratios_table, rolling_table, sweep_table,
    truth_table,
};
use tailcovar::io::{
    load_price_csv, loss_dates, losses_from_prices, read_columns, rolling_estimates,
    weekly_resample, Cell, OutputFormat, RollingConfig, Table,
};
use tailcovar::simulation::{grid_search, run_msre, sample_model, truth};
use tailcovar::{estimate_all, BivariateSample, Error};

use crate::args::{
    EstimateArgs, GridArgs, LossInput, RollingArgs, SampleArgs, SimulateArgs, SweepArgs, TruthArgs,
};
use crate::CliError;

pub struct Ctx {
    pub seed: u64,
    pub format: OutputFormat,
}

impl Ctx {
    fn emit(&self, table: &Table) -> Result<(), CliError> {
        table.write(std::io::stdout().lock(), self.format)?;
        Ok(())
    }
}

struct Losses {
    x: Vec<f64>,
    y: Vec<f64>,
    dates: Option<Vec<NaiveDate>>,
}

fn price_losses(path: &std::path::Path, x: &str, y: &str, weekly: bool) -> Result<Losses, CliError> {
    let columns = [x.to_string(), y.to_string()];
    let mut series = load_price_csv(path, Some(&columns))?;
    if weekly {
        series = series.iter().map(weekly_resample).collect();
    }
    Ok(Losses {
        x: losses_from_prices(&series[0])?,
        y: losses_from_prices(&series[1])?,
        dates: Some(loss_dates(&series[0]).to_vec()),
    })
}

fn load_losses(input: &LossInput) -> Result<Losses, CliError> {
    let columns = || match (&input.x, &input.y) {
        (Some(x), Some(y)) => Ok((x.as_str(), y.as_str())),
        _ => Err(CliError::Usage("--input requires both --x and --y".into())),
    };
    match (&input.input, &input.x_file, &input.y_file) {
        (Some(path), None, None) => {
            let (x, y) = columns()?;
            if input.prices {
                price_losses(path, x, y, input.weekly)
            } else {
                let mut cols = read_columns(path, &[x, y])?;
                let y = cols.pop().expect("two columns");
                let x = cols.pop().expect("two columns");
                Ok(Losses { x, y, dates: None })
            }
        }
        (None, Some(xf), Some(yf)) => {
            let x = read_columns(xf, &[&input.column])?.remove(0);
            let y = read_columns(yf, &[&input.column])?.remove(0);
            if x.len() != y.len() {
                return Err(Error::Misaligned(format!(
                    "{} has {} losses but {} has {}",
                    xf.display(),
                    x.len(),
                    yf.display(),
                    y.len()
                ))
                .into());
            }
            Ok(Losses { x, y, dates: None })
        }
        _ => Err(CliError::Usage(
            "give either --input with --x/--y or both --x-file and --y-file".into(),
        )),
    }
}

pub fn simulate(ctx: &Ctx, args: &SimulateArgs) -> Result<(), CliError> {
    let spec = args.model.spec()?;
    let tail = args.tail.config();
    let reports = run_msre(&spec, args.n, &tail, args.replications as usize, ctx.seed)?;
    for r in &reports {
        if !r.failures.is_empty() {
            log::warn!(
                "{}: {} of {} replications failed",
                r.estimator,
                r.failures.len(),
                args.replications
            );
        }
    }
    if let Some(path) = &args.ratios {
        let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ratios_table(&reports).write(file, ctx.format)?;
    }
    ctx.emit(&msre_table(&reports))
}

pub fn grid(ctx: &Ctx, args: &GridArgs) -> Result<(), CliError> {
    let spec = args.model.spec()?;
    let result = grid_search(
        &spec,
        args.n,
        args.tau_prime,
        &args.k_grid.0,
        &args.k1_grid.0,
        args.replications as usize,
        ctx.seed,
    )?;
    match &result.best {
        Some(b) => log::info!("best (k, k1) = ({}, {})", b.k, b.k1),
        None => log::warn!("CoVaR-I failed in every cell"),
    }
    for c in &result.excluded {
        log::warn!("excluded (k, k1) = ({}, {}): no successful replication", c.k, c.k1);
    }
    ctx.emit(&grid_table(&result, &spec))
}

pub fn truth_cmd(ctx: &Ctx, args: &TruthArgs) -> Result<(), CliError> {
    let spec = args.model.spec()?;
    ctx.emit(&truth_table(&spec, &truth(&spec, args.tau)?))
}

pub fn estimate(ctx: &Ctx, args: &EstimateArgs) -> Result<(), CliError> {
    let losses = load_losses(&args.input)?;
    let sample = BivariateSample::new(losses.x, losses.y)?;
    let tail = args.tail.config();
    let est = estimate_all(&sample, &tail)?;
    for d in &est.extrapolations.diagnostics {
        log::warn!("{d}");
    }
    ctx.emit(&estimate_table(&est, sample.n(), &tail, ctx.seed))
}

pub fn rolling(ctx: &Ctx, args: &RollingArgs) -> Result<(), CliError> {
    let losses = price_losses(&args.prices, &args.x, &args.y, args.weekly)?;
    let rc = RollingConfig {
        window: args.window,
        step: args.step,
        tail: args.tail.config(),
    };
    let rows = rolling_estimates(&losses.x, &losses.y, &rc)?;
    ctx.emit(&rolling_table(&rows, losses.dates.as_deref(), &rc, ctx.seed))
}

pub fn hillplot(ctx: &Ctx, args: &SweepArgs) -> Result<(), CliError> {
    let losses = load_losses(&args.input)?;
    let n = losses.x.len();
    let points = hill_sweep(&losses.x, args.k_grid.0.iter().copied());
    ctx.emit(&sweep_table("gamma1_hat", &points).with_meta(&[("n", n.into())]))
}

pub fn etaplot(ctx: &Ctx, args: &SweepArgs) -> Result<(), CliError> {
    let losses = load_losses(&args.input)?;
    let sample = BivariateSample::new(losses.x, losses.y)?;
    let points = eta_sweep(&sample, args.k_grid.0.iter().copied());
    ctx.emit(&sweep_table("eta_hat", &points).with_meta(&[("n", sample.n().into())]))
}

pub fn sample(ctx: &Ctx, args: &SampleArgs) -> Result<(), CliError> {
    let spec = args.model.spec()?;
    let s = sample_model(&spec, args.n, ctx.seed)?;
    let mut t = Table::new(["x", "y"]);
    for (x, y) in s.x().iter().zip(s.y()) {
        t.push(vec![Cell::Num(*x), Cell::Num(*y)]);
    }
    let mut meta = vec![("seed", ctx.seed.into())];
    meta.extend(model_meta(&spec));
    ctx.emit(&t.with_meta(&meta))?;
    std::io::stdout().flush()?;
    Ok(())
}
