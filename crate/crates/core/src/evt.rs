//! Intermediate-level tail estimators: the Hill estimate of the extreme
//! value index γ₁, the rank-based estimate of the tail-dependence
//! coefficient η, the empirical tail copula and the adjustment factor ξ.
//!
//! All rank quantities use `F̂(X_i) = R_i / n`, so every indicator reduces to
//! an integer comparison on ranks.

use serde::Serialize;

use crate::diagnostics::Diagnostic;
use crate::error::{check_range, Error, Result};
use crate::sample::{joint_tail_count, BivariateSample, RankVectors};

/// Intermediate quantities feeding the extrapolations.
#[derive(Debug, Clone)]
pub struct EvtEstimates {
    pub gamma1_hat: Result<f64>,
    pub eta_hat: Result<f64>,
    pub xi_hat: Result<f64>,
    /// `X_{n-k,n}`
    pub var_x_int: f64,
    /// `Y_{n-k,n}`
    pub var_y_int: f64,
}

/// Hill estimate of the extreme value index from the top `k1` values.
pub fn hill(values: &[f64], k1: usize) -> Result<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    hill_sorted(&sorted, k1)
}

/// [`hill`] on values already sorted ascending.
pub fn hill_sorted(sorted: &[f64], k1: usize) -> Result<f64> {
    let n = sorted.len();
    check_range("k1", k1, 1, n.saturating_sub(1))?;
    let threshold = sorted[n - k1 - 1];
    if threshold <= 0.0 {
        return Err(Error::NonPositiveThreshold { value: threshold });
    }
    let sum: f64 = sorted[n - k1..].iter().map(|&v| (v / threshold).ln()).sum();
    Ok(sum / k1 as f64)
}

/// `T_i = (n+1)/(n+1-R_i^X) ∧ (n+1)/(n+1-R_i^Y)`.
pub fn min_rank_transform(ranks: &RankVectors) -> Vec<f64> {
    let n1 = (ranks.len() + 1) as f64;
    ranks
        .rx
        .iter()
        .zip(&ranks.ry)
        .map(|(&rx, &ry)| n1 / (n1 - rx.min(ry) as f64))
        .collect()
}

/// Estimate of η: the Hill estimator applied to the min-rank transform.
///
/// Logs a warning when the estimate leaves (1/2, 1); see [`eta_diagnostic`].
pub fn eta_hat(sample: &BivariateSample, k2: usize) -> Result<f64> {
    let mut t = min_rank_transform(sample.ranks());
    t.sort_by(f64::total_cmp);
    let eta = hill_sorted(&t, k2)?;
    if let Some(d) = eta_diagnostic(eta) {
        log::debug!("{d}");
    }
    Ok(eta)
}

pub fn eta_diagnostic(eta: f64) -> Option<Diagnostic> {
    (!(eta > 0.5 && eta < 1.0)).then_some(Diagnostic::EtaOutsideRegime { eta })
}

/// Empirical tail copula `Ĉ_{n/k}(x, y)` scaled by `(n/k)^{1/η̂}`.
pub fn tail_copula_hat(sample: &BivariateSample, k: usize, x: f64, y: f64, eta_hat: f64) -> f64 {
    let n = sample.n();
    let kf = k as f64;
    let ranks = sample.ranks();
    let count = ranks
        .rx
        .iter()
        .zip(&ranks.ry)
        // `gap / k ≤ x` rather than `gap ≤ k·x`, so that x = gap/k is counted exactly
        .filter(|(&rx, &ry)| (n - rx) as f64 / kf <= x && (n - ry) as f64 / kf <= y)
        .count();
    let scale = ((n as f64 / kf).ln() / eta_hat).exp();
    scale * count as f64 / n as f64
}

/// Adjustment factor `ξ̂_{1-k/n}`: the smallest ξ in (0, 1) with
/// `Ĉ_{n/k}(ξ, 1) ≥ (k/n)^{2-1/η̂}`.
///
/// The η̂ powers cancel on both sides, leaving `count(ξ) ≥ k²/n`, so ξ̂ is the
/// `ceil(k²/n)`-th smallest of `(n - R_i^X)/k` over points with
/// `R_i^Y ≥ n - k`. The `eta_hat` argument is only validated.
pub fn xi_hat(sample: &BivariateSample, k: usize, eta_hat: f64) -> Result<f64> {
    let n = sample.n();
    check_range("k", k, 1, n - 1)?;
    if !(eta_hat > 0.0 && eta_hat.is_finite()) {
        return Err(Error::InvalidParameter(format!("eta_hat = {eta_hat} must be positive")));
    }
    let m = joint_tail_count(k, n);
    let ranks = sample.ranks();
    let mut gaps: Vec<usize> = ranks
        .rx
        .iter()
        .zip(&ranks.ry)
        .filter(|(_, &ry)| n - ry <= k)
        .map(|(&rx, _)| n - rx)
        .collect();
    if gaps.len() < m {
        return Err(Error::DegenerateXi(format!(
            "only {} points in the top-k y set, need {m}",
            gaps.len()
        )));
    }
    let (_, &mut gap, _) = gaps.select_nth_unstable(m - 1);
    if gap == 0 {
        return Err(Error::DegenerateXi(
            "candidate is 0 (the largest x falls in the top-k y set and k^2/n <= 1)".into(),
        ));
    }
    if gap >= k {
        return Err(Error::DegenerateXi(format!(
            "candidate {} is not below 1",
            gap as f64 / k as f64
        )));
    }
    Ok(gap as f64 / k as f64)
}

/// γ̂₁, η̂, ξ̂ and the intermediate VaRs for one sample.
pub fn estimate_evt(sample: &BivariateSample, k: usize, k1: usize, k2: usize) -> Result<EvtEstimates> {
    let var_x_int = sample.var_x(k)?;
    let var_y_int = sample.var_y(k)?;
    let gamma1_hat = hill_sorted(sample.sorted_x(), k1);
    let eta_hat = eta_hat(sample, k2);
    let xi_hat = match &eta_hat {
        Ok(eta) => xi_hat(sample, k, *eta),
        Err(e) => Err(e.clone()),
    };
    Ok(EvtEstimates {
        gamma1_hat,
        eta_hat,
        xi_hat,
        var_x_int,
        var_y_int,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub k: usize,
    pub estimate: f64,
}

/// Hill estimates of γ₁ across a range of `k1`, for threshold selection.
pub fn hill_sweep(values: &[f64], ks: impl IntoIterator<Item = usize>) -> Vec<(usize, Result<f64>)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks.into_iter().map(|k| (k, hill_sorted(&sorted, k))).collect()
}

/// η̂ across a range of `k2`.
pub fn eta_sweep(
    sample: &BivariateSample,
    ks: impl IntoIterator<Item = usize>,
) -> Vec<(usize, Result<f64>)> {
    let mut t = min_rank_transform(sample.ranks());
    t.sort_by(f64::total_cmp);
    ks.into_iter().map(|k| (k, hill_sorted(&t, k))).collect()
}
