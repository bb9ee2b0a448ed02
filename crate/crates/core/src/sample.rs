//! Paired loss samples, order statistics and ranks.
//!
//! A [`BivariateSample`] sorts both margins and ranks them once at
//! construction; every estimator reads from that cached view.
//!
//! Ties are broken by original index, so `rx[i] < rx[j]` iff
//! `x[i] < x[j]`, or `x[i] == x[j]` and `i < j`. With this rule the empirical
//! CDF at a sample point is exactly `rank / n`.

use serde::{Deserialize, Serialize};

use crate::diagnostics::Diagnostic;
use crate::error::{check_range, Error, Result};

/// Smallest sample size accepted by the estimators.
pub const MIN_SAMPLE_SIZE: usize = 4;

/// Ranks in `1..=n` of each margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVectors {
    pub rx: Vec<usize>,
    pub ry: Vec<usize>,
}

impl RankVectors {
    pub fn len(&self) -> usize {
        self.rx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rx.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct BivariateSample {
    x: Vec<f64>,
    y: Vec<f64>,
    sorted_x: Vec<f64>,
    sorted_y: Vec<f64>,
    ranks: RankVectors,
}

impl BivariateSample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidSample(format!(
                "x has {} values but y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < MIN_SAMPLE_SIZE {
            return Err(Error::InvalidSample(format!(
                "need at least {MIN_SAMPLE_SIZE} pairs, got {}",
                x.len()
            )));
        }
        if let Some(i) = x.iter().chain(y.iter()).position(|v| !v.is_finite()) {
            let (which, idx) = if i < x.len() { ("x", i) } else { ("y", i - x.len()) };
            return Err(Error::InvalidSample(format!("{which}[{idx}] is not finite")));
        }

        let (sorted_x, rx) = sort_and_rank(&x);
        let (sorted_y, ry) = sort_and_rank(&y);
        Ok(Self {
            x,
            y,
            sorted_x,
            sorted_y,
            ranks: RankVectors { rx, ry },
        })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// x values in ascending order.
    pub fn sorted_x(&self) -> &[f64] {
        &self.sorted_x
    }

    /// y values in ascending order.
    pub fn sorted_y(&self) -> &[f64] {
        &self.sorted_y
    }

    pub fn ranks(&self) -> &RankVectors {
        &self.ranks
    }

    /// `X_{n-k,n}`, the intermediate VaR estimate of x at level `1 - k/n`.
    pub fn var_x(&self, k: usize) -> Result<f64> {
        sorted_var(&self.sorted_x, k)
    }

    /// `Y_{n-k,n}`.
    pub fn var_y(&self, k: usize) -> Result<f64> {
        sorted_var(&self.sorted_y, k)
    }
}

fn sort_and_rank(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // stable sort keeps equal values in index order
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0; values.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    let sorted = order.iter().map(|&i| values[i]).collect();
    (sorted, ranks)
}

pub fn compute_ranks(sample: &BivariateSample) -> RankVectors {
    sample.ranks().clone()
}

/// Ranks of a single sequence under the index tie rule.
pub fn ranks_of(values: &[f64]) -> Vec<usize> {
    sort_and_rank(values).1
}

/// The `r`-th smallest value (1-based).
pub fn order_statistic(values: &[f64], r: usize) -> Result<f64> {
    check_range("r", r, 1, values.len().max(1))?;
    if values.is_empty() {
        return Err(Error::InvalidSample("empty sequence".into()));
    }
    let mut buf = values.to_vec();
    let (_, v, _) = buf.select_nth_unstable_by(r - 1, |a, b| a.total_cmp(b));
    Ok(*v)
}

/// `X_{n-k,n}` for `1 <= k <= n-1`.
pub fn empirical_var(values: &[f64], k: usize) -> Result<f64> {
    let n = values.len();
    check_range("k", k, 1, n.saturating_sub(1))?;
    order_statistic(values, n - k)
}

pub(crate) fn sorted_var(sorted: &[f64], k: usize) -> Result<f64> {
    let n = sorted.len();
    check_range("k", k, 1, n.saturating_sub(1))?;
    Ok(sorted[n - k - 1])
}

/// Hyperparameters shared by every estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    /// Tail count for the adjustment factor and intermediate CoVaR/CoES.
    pub k: usize,
    /// Tail count for the Hill estimate of γ₁.
    pub k1: usize,
    /// Tail count for the η estimate.
    pub k2: usize,
    /// Extreme probability level τ′.
    pub tau_prime: f64,
}

impl TailConfig {
    pub fn new(k: usize, k1: usize, k2: usize, tau_prime: f64) -> Self {
        Self {
            k,
            k1,
            k2,
            tau_prime,
        }
    }

    /// Checks the config against a sample size and returns any warnings.
    pub fn validate(&self, n: usize) -> Result<Vec<Diagnostic>> {
        let max = n.saturating_sub(1);
        check_range("k", self.k, 1, max)?;
        check_range("k1", self.k1, 1, max)?;
        check_range("k2", self.k2, 1, max)?;
        if !(self.tau_prime > 0.0 && self.tau_prime < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tau_prime = {} must lie in (0, 1)",
                self.tau_prime
            )));
        }
        let mut diags = Vec::new();
        if self.k * self.k < 2 * n {
            diags.push(Diagnostic::SmallJointTail { k: self.k, n });
        }
        Ok(diags)
    }
}

/// `ceil(k²/n)`: the joint-tail count equivalent to a probability of `(k/n)²`.
pub fn joint_tail_count(k: usize, n: usize) -> usize {
    (k * k).div_ceil(n)
}
