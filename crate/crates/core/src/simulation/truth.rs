//! Ground-truth CoVaR and CoES for the benchmark models.
//!
//! CoVaR(τ) solves `P(X ≥ c, Y ≥ VaR_Y(τ)) = (1 − τ)²` and CoES(τ) is
//! `E[X | X ≥ CoVaR(τ), Y ≥ VaR_Y(τ)]`.

use rayon::prelude::*;
use serde::Serialize;

use super::models::{stream_rng, ModelSpec};
use crate::error::{Error, Result};
use crate::numeric::{decreasing_root, integrate_to_infinity};

const ROOT_TOL: f64 = 1e-13;
const QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruthValues {
    pub tau: f64,
    pub var_y: f64,
    pub covar: f64,
    pub coes: f64,
    pub gamma1: f64,
    pub eta: f64,
}

fn check_tau(tau: f64) -> Result<f64> {
    if tau > 0.0 && tau < 1.0 {
        Ok(1.0 - tau)
    } else {
        Err(Error::InvalidParameter(format!("tau = {tau} must lie in (0, 1)")))
    }
}

/// `VaR_Y(τ)`.
pub fn true_var_y(spec: &ModelSpec, tau: f64) -> Result<f64> {
    spec.validate()?;
    let p = check_tau(tau)?;
    match *spec {
        ModelSpec::MarshallOlkinPareto { a, .. } => Ok(p.powf(-1.0 / a)),
        ModelSpec::ParetoMixture { .. } => {
            decreasing_root(|q| spec.marginal_survival(q) - p, ROOT_TOL)
        }
    }
}

/// Closed-form CoVaR for the Marshall-Olkin model; `None` for other models.
///
/// On the survival scale `u = c^{-a}`, `v = 1 − τ = p`, the defining equation
/// `uv·min(u^{-a1}, v^{-a2}) = p²` has the root `u = p^{1+a2}` when
/// `a1(1 + a2) ≥ a2` and `u = p^{1/(1−a1)}` otherwise.
pub fn analytic_covar(spec: &ModelSpec, tau: f64) -> Option<f64> {
    let ModelSpec::MarshallOlkinPareto { a, a1, a2 } = *spec else {
        return None;
    };
    let p = check_tau(tau).ok()?;
    let log_u = if a1 * (1.0 + a2) >= a2 {
        (1.0 + a2) * p.ln()
    } else {
        p.ln() / (1.0 - a1)
    };
    Some((-log_u / a).exp())
}

/// CoVaR by bisection on the joint survival function.
pub fn numeric_covar(spec: &ModelSpec, tau: f64) -> Result<f64> {
    let q = true_var_y(spec, tau)?;
    let p = 1.0 - tau;
    let target = p * p;
    decreasing_root(|c| spec.joint_survival(c, q) - target, ROOT_TOL)
}

pub fn true_covar(spec: &ModelSpec, tau: f64) -> Result<f64> {
    spec.validate()?;
    check_tau(tau)?;
    match analytic_covar(spec, tau) {
        Some(c) => Ok(c),
        None => numeric_covar(spec, tau),
    }
}

/// Closed-form CoES where the joint tail beyond CoVaR is exactly Pareto(a):
/// the Marshall-Olkin branch `a1(1 + a2) ≥ a2`, giving `CoVaR · a/(a − 1)`.
pub fn analytic_coes(spec: &ModelSpec, tau: f64) -> Option<f64> {
    let ModelSpec::MarshallOlkinPareto { a, a1, a2 } = *spec else {
        return None;
    };
    if a <= 1.0 || a1 * (1.0 + a2) < a2 {
        return None;
    }
    Some(analytic_covar(spec, tau)? * a / (a - 1.0))
}

/// CoES as `c + ∫_c^∞ P(X ≥ x, Y ≥ q) dx / P(X ≥ c, Y ≥ q)` by adaptive
/// quadrature.
pub fn true_coes(spec: &ModelSpec, tau: f64) -> Result<f64> {
    let gamma1 = spec.gamma1();
    if gamma1 >= 1.0 {
        return Err(Error::Gamma1OutOfRange(gamma1));
    }
    let c = true_covar(spec, tau)?;
    let q = true_var_y(spec, tau)?;
    let kinks = spec.joint_survival_kinks(q);
    let tail = integrate_to_infinity(|x| spec.joint_survival(x, q), c, &kinks, QUAD_TOL)?;
    Ok(c + tail / spec.joint_survival(c, q))
}

pub fn truth(spec: &ModelSpec, tau: f64) -> Result<TruthValues> {
    Ok(TruthValues {
        tau,
        var_y: true_var_y(spec, tau)?,
        covar: true_covar(spec, tau)?,
        coes: true_coes(spec, tau)?,
        gamma1: spec.gamma1(),
        eta: spec.eta(),
    })
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub hits: u64,
    pub draws: u64,
}

impl McEstimate {
    /// Number of standard errors between the estimate and `target`.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.value - target) / self.std_error
    }
}

const MC_CHUNK: u64 = 1 << 16;

/// Per-chunk (hits, Σx, Σx²) over draws with `X ≥ c` and `Y ≥ q`.
fn mc_accumulate(spec: &ModelSpec, c: f64, q: f64, draws: u64, seed: u64) -> (u64, f64, f64) {
    let chunks = draws.div_ceil(MC_CHUNK);
    let parts: Vec<(u64, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, chunk);
            let len = MC_CHUNK.min(draws - chunk * MC_CHUNK);
            let mut acc = (0u64, 0.0, 0.0);
            for _ in 0..len {
                let (x, y) = spec.draw(&mut rng);
                if x >= c && y >= q {
                    acc.0 += 1;
                    acc.1 += x;
                    acc.2 += x * x;
                }
            }
            acc
        })
        .collect();
    parts
        .into_iter()
        .fold((0, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
}

/// Monte Carlo estimate of `P(X ≥ c, Y ≥ q)`.
pub fn mc_joint_exceedance(spec: &ModelSpec, c: f64, q: f64, draws: u64, seed: u64) -> Result<McEstimate> {
    spec.validate()?;
    if draws == 0 {
        return Err(Error::InvalidParameter("draws must be positive".into()));
    }
    let (hits, _, _) = mc_accumulate(spec, c, q, draws, seed);
    let p = hits as f64 / draws as f64;
    Ok(McEstimate {
        value: p,
        std_error: (p * (1.0 - p) / draws as f64).sqrt(),
        hits,
        draws,
    })
}

/// Monte Carlo estimate of `E[X | X ≥ c, Y ≥ q]`.
pub fn mc_conditional_mean(spec: &ModelSpec, c: f64, q: f64, draws: u64, seed: u64) -> Result<McEstimate> {
    spec.validate()?;
    let (hits, sum, sum_sq) = mc_accumulate(spec, c, q, draws, seed);
    if hits < 2 {
        return Err(Error::InsufficientJointTail {
            available: hits as usize,
            required: 2,
        });
    }
    let h = hits as f64;
    let mean = sum / h;
    let var = (sum_sq - h * mean * mean) / (h - 1.0);
    Ok(McEstimate {
        value: mean,
        std_error: (var / h).sqrt(),
        hits,
        draws,
    })
}
