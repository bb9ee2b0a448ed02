use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tailcovar::io::OutputFormat;
use tailcovar::simulation::ModelSpec;
use tailcovar::TailConfig;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "tailcovar", version, about = "Extreme CoVaR and CoES estimation")]
pub struct Cli {
    /// Base seed for anything random.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub output: Format,

    /// Only log errors.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// MSRE of the five estimators over simulated replications.
    Simulate(SimulateArgs),
    /// Grid search over (k, k1) minimising the CoVaR-I MSRE.
    Grid(GridArgs),
    /// True VaR, CoVaR and CoES of a model.
    Truth(TruthArgs),
    /// Estimates from observed losses.
    Estimate(EstimateArgs),
    /// Estimates on a moving window of a price file.
    Rolling(RollingArgs),
    /// Hill estimates of the x tail across k1.
    Hillplot(SweepArgs),
    /// Tail dependence estimates across k2.
    Etaplot(SweepArgs),
    /// Draws a sample from a model and writes it as a loss CSV.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelKind {
    /// Marshall-Olkin copula with Pareto margins.
    Mo,
    /// Mixture of Pareto variables.
    Mix,
    Model1,
    Model2,
    Model3,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Pareto index of the margins.
    #[arg(long, default_value_t = 3.0)]
    pub a: f64,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    /// Pareto index of the common component (mixture only).
    #[arg(long)]
    pub b: Option<f64>,
}

impl ModelArgs {
    pub fn spec(&self) -> Result<ModelSpec, CliError> {
        let need = |v: Option<f64>, flag: &str, model: &str| {
            v.ok_or_else(|| CliError::Usage(format!("--model {model} requires --{flag}")))
        };
        let spec = match self.model {
            ModelKind::Model1 => ModelSpec::model1(),
            ModelKind::Model2 => ModelSpec::model2(),
            ModelKind::Model3 => ModelSpec::model3(),
            ModelKind::Mo => ModelSpec::MarshallOlkinPareto {
                a: self.a,
                a1: need(self.a1, "a1", "mo")?,
                a2: need(self.a2, "a2", "mo")?,
            },
            ModelKind::Mix => ModelSpec::ParetoMixture {
                a: self.a,
                b: need(self.b, "b", "mix")?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct TailArgs {
    /// Intermediate level 1 - k/n for VaR, CoVaR and CoES.
    #[arg(long)]
    pub k: usize,
    /// Upper order statistics used by the Hill estimator.
    #[arg(long)]
    pub k1: usize,
    /// Upper order statistics for the tail dependence estimate; defaults to k1.
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long, default_value_t = 0.99)]
    pub tau_prime: f64,
}

impl TailArgs {
    pub fn config(&self) -> TailConfig {
        TailConfig::new(self.k, self.k1, self.k2.unwrap_or(self.k1), self.tau_prime)
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub tail: TailArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub replications: u64,
    /// Also write per-replication estimate/truth ratios here.
    #[arg(long)]
    pub ratios: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.99)]
    pub tau_prime: f64,
    /// Values of k, e.g. `100,137,180` or `100:300:20`.
    #[arg(long, value_parser = parse_grid)]
    pub k_grid: Grid,
    /// Values of k1 (k2 follows k1).
    #[arg(long, value_parser = parse_grid)]
    pub k1_grid: Grid,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub replications: u64,
}

#[derive(Debug, Args)]
pub struct TruthArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub tau: f64,
}

/// Where the two loss series come from.
#[derive(Debug, Args)]
pub struct LossInput {
    /// CSV with a header; --x and --y name its columns.
    #[arg(long, conflicts_with_all = ["x_file", "y_file"])]
    pub input: Option<PathBuf>,
    /// Treat --input as a price file (`date` column plus prices) and use
    /// negative log returns.
    #[arg(long, requires = "input")]
    pub prices: bool,
    /// Resample prices to the last observation of each ISO week first.
    #[arg(long, requires = "prices")]
    pub weekly: bool,
    /// Column holding the institution's losses (or prices).
    #[arg(long)]
    pub x: Option<String>,
    /// Column holding the system's losses (or prices).
    #[arg(long)]
    pub y: Option<String>,
    /// Separate CSV for the x losses.
    #[arg(long, requires = "y_file")]
    pub x_file: Option<PathBuf>,
    /// Separate CSV for the y losses.
    #[arg(long, requires = "x_file")]
    pub y_file: Option<PathBuf>,
    /// Column read from --x-file and --y-file.
    #[arg(long, default_value = "loss")]
    pub column: String,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: LossInput,
    #[command(flatten)]
    pub tail: TailArgs,
}

#[derive(Debug, Args)]
pub struct RollingArgs {
    /// Price CSV with a `date` column.
    #[arg(long)]
    pub prices: PathBuf,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long)]
    pub weekly: bool,
    #[arg(long)]
    pub window: usize,
    #[arg(long, default_value_t = tailcovar::io::RollingConfig::DEFAULT_STEP)]
    pub step: usize,
    #[command(flatten)]
    pub tail: TailArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: LossInput,
    /// Values of k to evaluate, e.g. `50:1000:10`.
    #[arg(long, value_parser = parse_grid)]
    pub k_grid: Grid,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct Grid(pub Vec<usize>);

/// `a,b,c` or `start:end:step` (inclusive), or a mix of both.
fn parse_grid(s: &str) -> Result<Grid, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let nums: Vec<usize> = part
            .split(':')
            .map(|v| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}")))
            .collect::<Result<_, _>>()?;
        match nums[..] {
            [v] => out.push(v),
            [start, end, step] if step > 0 && start <= end => {
                out.extend((start..=end).step_by(step));
            }
            _ => return Err(format!("`{part}` is neither a number nor start:end:step")),
        }
    }
    if out.is_empty() {
        return Err("empty grid".into());
    }
    Ok(Grid(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("100,137").unwrap().0, vec![100, 137]);
        assert_eq!(parse_grid("10:30:10,5").unwrap().0, vec![10, 20, 30, 5]);
        assert!(parse_grid("10:5:1").is_err());
        assert!(parse_grid("x").is_err());
        assert!(parse_grid("").is_err());
    }
}
