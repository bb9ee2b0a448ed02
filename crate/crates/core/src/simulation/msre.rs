//! Monte Carlo benchmark: MSRE of each extrapolation against the model
//! truth, plus the `(k, k1)` grid search.
//!
//! Replication `r` draws its sample from stream `r` of the base seed, so a
//! single replication can be reproduced on its own. Replications run in
//! parallel but are reduced in index order, which keeps reports bit-identical
//! across thread counts.

use rayon::prelude::*;
use serde::Serialize;

use super::models::{sample_model_stream, ModelSpec};
use super::truth::{truth, TruthValues};
use crate::covar::{estimate_all, ESTIMATOR_NAMES};
use crate::error::{Error, Result};
use crate::sample::{BivariateSample, TailConfig};

/// Everything needed to rerun a benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub n: usize,
    pub tail: TailConfig,
    pub replications: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationFailure {
    pub replication: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MsreReport {
    pub estimator: String,
    pub truth: f64,
    /// Mean of `(estimate/truth − 1)²` over successful replications.
    pub msre: Option<f64>,
    /// `estimate/truth` per successful replication, in replication order.
    pub ratios: Vec<f64>,
    pub failures: Vec<ReplicationFailure>,
    pub config: RunConfig,
}

impl MsreReport {
    pub fn successes(&self) -> usize {
        self.ratios.len()
    }

    pub fn interquartile_range(&self) -> Option<f64> {
        Some(quantile(&self.ratios, 0.75)? - quantile(&self.ratios, 0.25)?)
    }

    pub fn median_ratio(&self) -> Option<f64> {
        quantile(&self.ratios, 0.5)
    }
}

/// Linear-interpolation sample quantile (type 7).
pub fn quantile(values: &[f64], prob: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * prob.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

/// One output of an estimator under test, in [`ESTIMATOR_NAMES`] order.
pub type EstimatorOutputs = [Result<f64>; 5];

/// Runs `estimator` on `replications` independent samples and scores each of
/// its five outputs against `truth`.
pub fn run_msre_with<F>(
    spec: &ModelSpec,
    n: usize,
    tail: &TailConfig,
    replications: usize,
    seed: u64,
    truth: &TruthValues,
    estimator: F,
) -> Result<Vec<MsreReport>>
where
    F: Fn(&BivariateSample) -> EstimatorOutputs + Sync,
{
    if replications == 0 {
        return Err(Error::InvalidParameter("replications must be at least 1".into()));
    }
    let outputs: Vec<EstimatorOutputs> = (0..replications)
        .into_par_iter()
        .map(|r| match sample_model_stream(spec, n, seed, r as u64) {
            Ok(s) => estimator(&s),
            Err(e) => std::array::from_fn(|_| Err(e.clone())),
        })
        .collect::<Vec<_>>();

    let config = RunConfig {
        model: *spec,
        n,
        tail: *tail,
        replications,
        seed,
    };
    let targets = [truth.covar, truth.covar, truth.coes, truth.coes, truth.coes];
    Ok(ESTIMATOR_NAMES
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let mut ratios = Vec::with_capacity(replications);
            let mut failures = Vec::new();
            for (r, out) in outputs.iter().enumerate() {
                match &out[j] {
                    Ok(v) => ratios.push(v / targets[j]),
                    Err(e) => failures.push(ReplicationFailure {
                        replication: r,
                        error: e.clone(),
                    }),
                }
            }
            let msre = (!ratios.is_empty()).then(|| {
                ratios.iter().map(|q| (q - 1.0).powi(2)).sum::<f64>() / ratios.len() as f64
            });
            MsreReport {
                estimator: name.to_string(),
                truth: targets[j],
                msre,
                ratios,
                failures,
                config,
            }
        })
        .collect())
}

fn pipeline_outputs(sample: &BivariateSample, tail: &TailConfig) -> EstimatorOutputs {
    match estimate_all(sample, tail) {
        Ok(est) => est.extrapolations.results().map(|r| r.clone()),
        Err(e) => std::array::from_fn(|_| Err(e.clone())),
    }
}

/// MSRE of the five extrapolations at level `tail.tau_prime`.
pub fn run_msre(
    spec: &ModelSpec,
    n: usize,
    tail: &TailConfig,
    replications: usize,
    seed: u64,
) -> Result<Vec<MsreReport>> {
    tail.validate(n)?;
    let truth = truth(spec, tail.tau_prime)?;
    run_msre_with(spec, n, tail, replications, seed, &truth, |s| pipeline_outputs(s, tail))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub k: usize,
    pub k1: usize,
    /// CoVaR-I MSRE over the replications where it succeeded.
    pub msre: Option<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub best: Option<GridCell>,
    /// Every cell, sorted by `(k, k1)`.
    pub surface: Vec<GridCell>,
    /// Cells where CoVaR-I failed in every replication.
    pub excluded: Vec<GridCell>,
    pub n: usize,
    pub tau_prime: f64,
    pub replications: usize,
    pub seed: u64,
}

/// Scores every `(k, k1)` pair (with `k2 = k1`) by the CoVaR-I MSRE and
/// returns the minimiser, ties going to the smallest `(k, k1)`.
///
/// All cells are evaluated on the same replicated samples.
pub fn grid_search(
    spec: &ModelSpec,
    n: usize,
    tau_prime: f64,
    k_grid: &[usize],
    k1_grid: &[usize],
    replications: usize,
    seed: u64,
) -> Result<GridResult> {
    if k_grid.is_empty() || k1_grid.is_empty() {
        return Err(Error::InvalidParameter("grids must be non-empty".into()));
    }
    if replications == 0 {
        return Err(Error::InvalidParameter("replications must be at least 1".into()));
    }
    let mut pairs: Vec<(usize, usize)> = k_grid
        .iter()
        .flat_map(|&k| k1_grid.iter().map(move |&k1| (k, k1)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    for &(k, k1) in &pairs {
        TailConfig::new(k, k1, k1, tau_prime).validate(n)?;
    }
    let target = truth(spec, tau_prime)?.covar;
    let samples: Vec<BivariateSample> = (0..replications)
        .into_par_iter()
        .map(|r| sample_model_stream(spec, n, seed, r as u64))
        .collect::<Result<_>>()?;

    let surface: Vec<GridCell> = pairs
        .par_iter()
        .map(|&(k, k1)| {
            let tail = TailConfig::new(k, k1, k1, tau_prime);
            let mut sum = 0.0;
            let mut ok = 0usize;
            for s in &samples {
                if let Ok(v) = &pipeline_outputs(s, &tail)[0] {
                    sum += (v / target - 1.0).powi(2);
                    ok += 1;
                }
            }
            GridCell {
                k,
                k1,
                msre: (ok > 0).then(|| sum / ok as f64),
                failures: replications - ok,
            }
        })
        .collect();

    let mut best: Option<GridCell> = None;
    for cell in surface.iter().filter(|c| c.msre.is_some()) {
        if best.as_ref().is_none_or(|b| cell.msre < b.msre) {
            best = Some(cell.clone());
        }
    }
    let excluded = surface.iter().filter(|c| c.msre.is_none()).cloned().collect();
    Ok(GridResult {
        best,
        surface,
        excluded,
        n,
        tau_prime,
        replications,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        assert_eq!(quantile(&[], 0.5), None);
        assert_eq!(quantile(&[3.0, 1.0, 2.0], 0.5), Some(2.0));
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.25), Some(1.75));
    }

    #[test]
    fn stub_estimator_at_truth_has_zero_msre() {
        let m = ModelSpec::model1();
        let tail = TailConfig::new(50, 50, 50, 0.99);
        let t = truth(&m, 0.99).unwrap();
        let reports = run_msre_with(&m, 200, &tail, 1, 5, &t, |_| {
            [Ok(t.covar), Ok(t.covar), Ok(t.coes), Ok(t.coes), Ok(t.coes)]
        })
        .unwrap();
        for r in &reports {
            assert_eq!(r.msre, Some(0.0));
            assert_eq!(r.ratios, vec![1.0]);
        }
    }

    #[test]
    fn failures_are_reported_not_dropped() {
        let m = ModelSpec::model1();
        let tail = TailConfig::new(50, 50, 50, 0.99);
        let t = truth(&m, 0.99).unwrap();
        let reports = run_msre_with(&m, 200, &tail, 4, 5, &t, |s| {
            let odd = s.x()[0] > 2.0;
            std::array::from_fn(|_| if odd { Err(Error::DegenerateXi("stub".into())) } else { Ok(1.0) })
        })
        .unwrap();
        for r in &reports {
            assert_eq!(r.successes() + r.failures.len(), 4);
        }
        assert!(run_msre_with(&m, 200, &tail, 0, 5, &t, |_| std::array::from_fn(|_| Ok(1.0))).is_err());
    }

    #[test]
    fn run_is_deterministic() {
        let m = ModelSpec::model1();
        let tail = TailConfig::new(40, 40, 40, 0.99);
        let a = run_msre(&m, 300, &tail, 12, 9).unwrap();
        let b = run_msre(&m, 300, &tail, 12, 9).unwrap();
        assert_eq!(a, b);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_msre(&m, 300, &tail, 12, 9).unwrap());
        assert_eq!(a, single);
        assert_eq!(a[0].config.seed, 9);
    }

    #[test]
    fn grid_single_cell_and_exclusion() {
        let m = ModelSpec::model1();
        let g = grid_search(&m, 300, 0.99, &[60], &[50], 5, 1).unwrap();
        assert_eq!(g.surface.len(), 1);
        assert_eq!(g.best.as_ref().map(|c| (c.k, c.k1)), Some((60, 50)));

        // k = 1 makes the adjustment factor degenerate in every replication
        let g = grid_search(&m, 300, 0.99, &[1, 60], &[50], 5, 1).unwrap();
        assert_eq!(g.excluded.len(), 1);
        assert_eq!(g.excluded[0].k, 1);
        assert_eq!(g.excluded[0].failures, 5);
        assert_eq!(g.best.as_ref().map(|c| c.k), Some(60));

        assert!(grid_search(&m, 300, 0.99, &[], &[50], 5, 1).is_err());
        assert!(grid_search(&m, 300, 0.99, &[400], &[50], 5, 1).is_err());
    }

    #[test]
    fn grid_ties_go_to_smallest_pair() {
        let m = ModelSpec::model1();
        let g = grid_search(&m, 300, 0.99, &[60, 50], &[40, 30], 3, 2).unwrap();
        let min = g
            .surface
            .iter()
            .filter_map(|c| c.msre)
            .fold(f64::INFINITY, f64::min);
        let first_min = g.surface.iter().find(|c| c.msre == Some(min)).unwrap();
        assert_eq!(g.best.as_ref().unwrap(), first_min);
        assert_eq!((g.surface[0].k, g.surface[0].k1), (50, 30));
    }
}
