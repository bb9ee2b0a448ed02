//! Intermediate CoVaR/CoES estimators and the five extreme-level
//! extrapolations.
//!
//! Every extrapolation multiplies an intermediate quantity by
//! `d_n^{γ̂₁(3 − 1/η̂)}` with `d_n = k / (n (1 − τ′))`. Powers are evaluated as
//! `exp(exponent · ln base)`.

use crate::diagnostics::Diagnostic;
use crate::error::{check_range, Error, Result};
use crate::evt::{estimate_evt, eta_diagnostic, EvtEstimates};
use crate::sample::{joint_tail_count, BivariateSample, TailConfig};

/// CoVaR and CoES estimated at the intermediate level `1 - k/n`.
#[derive(Debug, Clone)]
pub struct IntermediateEstimates {
    pub covar_int: Result<f64>,
    pub coes_int: Result<f64>,
    /// `m = ceil(k²/n)`
    pub threshold_count: usize,
}

/// Intermediate CoVaR: `sup{s : P_n(s) ≥ (k/n)²}` with
/// `P_n(s) = n⁻¹ Σ I(X_i ≥ s, Y_i ≥ Y_{n-k,n})`.
///
/// `P_n(s) ≥ (k/n)²` iff at least `m = ceil(k²/n)` points of the conditioning
/// set have `X_i ≥ s`, so the supremum is the m-th largest x in that set.
pub fn intermediate_covar(sample: &BivariateSample, k: usize) -> Result<f64> {
    let n = sample.n();
    let var_y = sample.var_y(k)?;
    let m = joint_tail_count(k, n);
    let mut xs: Vec<f64> = sample
        .x()
        .iter()
        .zip(sample.y())
        .filter(|(_, &y)| y >= var_y)
        .map(|(&x, _)| x)
        .collect();
    if xs.len() < m {
        return Err(Error::InsufficientJointTail {
            available: xs.len(),
            required: m,
        });
    }
    let (_, &mut v, _) = xs.select_nth_unstable_by(m - 1, |a, b| b.total_cmp(a));
    Ok(v)
}

/// Intermediate CoES: `(n/k²) Σ X_i I(X_i ≥ CoVaR̂, Y_i ≥ Y_{n-k,n})`.
pub fn intermediate_coes(sample: &BivariateSample, k: usize, covar_int: f64) -> Result<f64> {
    let n = sample.n();
    let var_y = sample.var_y(k)?;
    let sum: f64 = sample
        .x()
        .iter()
        .zip(sample.y())
        .filter(|(&x, &y)| x >= covar_int && y >= var_y)
        .map(|(&x, _)| x)
        .sum();
    Ok(n as f64 / (k * k) as f64 * sum)
}

pub fn estimate_intermediate(sample: &BivariateSample, k: usize) -> Result<IntermediateEstimates> {
    check_range("k", k, 1, sample.n() - 1)?;
    let covar_int = intermediate_covar(sample, k);
    let coes_int = match &covar_int {
        Ok(c) => intermediate_coes(sample, k, *c),
        Err(e) => Err(e.clone()),
    };
    Ok(IntermediateEstimates {
        covar_int,
        coes_int,
        threshold_count: joint_tail_count(k, sample.n()),
    })
}

/// Inputs shared by the extrapolations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationInputs {
    pub gamma1_hat: f64,
    pub eta_hat: f64,
    pub xi_hat: Option<f64>,
    pub var_x_int: f64,
    pub covar_int: Option<f64>,
    pub coes_int: Option<f64>,
    pub k: usize,
    pub n: usize,
    pub tau_prime: f64,
}

impl ExtrapolationInputs {
    /// `d_n = k / (n (1 − τ′))`
    pub fn dn(&self) -> f64 {
        self.k as f64 / (self.n as f64 * (1.0 - self.tau_prime))
    }

    /// `γ̂₁ (3 − 1/η̂)`
    pub fn exponent(&self) -> f64 {
        self.gamma1_hat * (3.0 - 1.0 / self.eta_hat)
    }

    /// `ln d_n^{γ̂₁(3 − 1/η̂)}`
    fn log_factor(&self) -> f64 {
        self.exponent() * self.dn().ln()
    }

    fn check(&self) -> Result<()> {
        if !(self.tau_prime > 0.0 && self.tau_prime < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tau_prime = {} must lie in (0, 1)",
                self.tau_prime
            )));
        }
        if self.eta_hat.is_nan() || self.eta_hat <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "eta_hat = {} must be positive",
                self.eta_hat
            )));
        }
        if self.gamma1_hat.is_nan() || self.gamma1_hat < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma1_hat = {} must be non-negative",
                self.gamma1_hat
            )));
        }
        check_range("k", self.k, 1, self.n.saturating_sub(1))
    }
}

/// VaR-based extrapolation: `d_n^{γ̂₁(3−1/η̂)} · ξ̂^{−γ̂₁} · X_{n−k,n}`.
pub fn covar_extrap_i(inputs: &ExtrapolationInputs) -> Result<f64> {
    inputs.check()?;
    let xi = inputs
        .xi_hat
        .ok_or_else(|| Error::MissingInput("adjustment factor xi_hat".into()))?;
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::InvalidParameter(format!("xi_hat = {xi} must lie in (0, 1]")));
    }
    Ok((inputs.log_factor() - inputs.gamma1_hat * xi.ln()).exp() * inputs.var_x_int)
}

fn coes_from_covar(gamma1_hat: f64, covar: f64) -> Result<f64> {
    if gamma1_hat >= 1.0 {
        return Err(Error::Gamma1OutOfRange(gamma1_hat));
    }
    Ok(covar / (1.0 - gamma1_hat))
}

/// `CoVaR-I / (1 − γ̂₁)`
pub fn coes_extrap_i(inputs: &ExtrapolationInputs, covar_i: f64) -> Result<f64> {
    coes_from_covar(inputs.gamma1_hat, covar_i)
}

/// Intermediate-CoVaR extrapolation: `d_n^{γ̂₁(3−1/η̂)} · CoVaR̂(1 − k/n)`.
pub fn covar_extrap_ii(inputs: &ExtrapolationInputs) -> Result<f64> {
    inputs.check()?;
    let covar = inputs
        .covar_int
        .ok_or_else(|| Error::MissingInput("intermediate CoVaR".into()))?;
    Ok(inputs.log_factor().exp() * covar)
}

/// `CoVaR-II / (1 − γ̂₁)`
pub fn coes_extrap_ii(inputs: &ExtrapolationInputs, covar_ii: f64) -> Result<f64> {
    coes_from_covar(inputs.gamma1_hat, covar_ii)
}

/// Intermediate-CoES extrapolation: `d_n^{γ̂₁(3−1/η̂)} · CoEŜ(1 − k/n)`.
pub fn coes_extrap_iii(inputs: &ExtrapolationInputs) -> Result<f64> {
    inputs.check()?;
    let coes = inputs
        .coes_int
        .ok_or_else(|| Error::MissingInput("intermediate CoES".into()))?;
    if let Some(d) = coes_iii_diagnostic(inputs.gamma1_hat, inputs.eta_hat) {
        log::debug!("{d}");
    }
    Ok(inputs.log_factor().exp() * coes)
}

pub fn coes_iii_diagnostic(gamma1_hat: f64, eta_hat: f64) -> Option<Diagnostic> {
    let bound = (3.0 - 1.0 / eta_hat) / 4.0;
    (gamma1_hat >= bound).then_some(Diagnostic::CoesIiiBound {
        gamma1: gamma1_hat,
        bound,
    })
}

/// The five extreme-level estimates.
#[derive(Debug, Clone)]
pub struct ExtrapolationSet {
    pub covar_i: Result<f64>,
    pub covar_ii: Result<f64>,
    pub coes_i: Result<f64>,
    pub coes_ii: Result<f64>,
    pub coes_iii: Result<f64>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Names of the five extrapolations, in report order.
pub const ESTIMATOR_NAMES: [&str; 5] = ["covar_i", "covar_ii", "coes_i", "coes_ii", "coes_iii"];

impl ExtrapolationSet {
    /// The five results in [`ESTIMATOR_NAMES`] order.
    pub fn results(&self) -> [&Result<f64>; 5] {
        [
            &self.covar_i,
            &self.covar_ii,
            &self.coes_i,
            &self.coes_ii,
            &self.coes_iii,
        ]
    }

    fn all_failed(e: Error, diagnostics: Vec<Diagnostic>) -> Self {
        Self {
            covar_i: Err(e.clone()),
            covar_ii: Err(e.clone()),
            coes_i: Err(e.clone()),
            coes_ii: Err(e.clone()),
            coes_iii: Err(e),
            diagnostics,
        }
    }
}

/// Everything [`estimate_all`] produces for one sample.
#[derive(Debug, Clone)]
pub struct Estimates {
    pub evt: EvtEstimates,
    pub intermediate: IntermediateEstimates,
    pub extrapolations: ExtrapolationSet,
}

/// Runs the full pipeline. Only an invalid config fails outright; individual
/// estimator failures are recorded in place and do not affect the others.
pub fn estimate_all(sample: &BivariateSample, config: &TailConfig) -> Result<Estimates> {
    let mut diagnostics = config.validate(sample.n())?;
    let evt = estimate_evt(sample, config.k, config.k1, config.k2)?;
    let intermediate = estimate_intermediate(sample, config.k)?;

    let (gamma1, eta) = match (&evt.gamma1_hat, &evt.eta_hat) {
        (Ok(g), Ok(e)) => (*g, *e),
        (Err(err), _) | (_, Err(err)) => {
            let extrapolations = ExtrapolationSet::all_failed(err.clone(), diagnostics);
            return Ok(Estimates {
                evt,
                intermediate,
                extrapolations,
            });
        }
    };
    diagnostics.extend(eta_diagnostic(eta));
    diagnostics.extend(coes_iii_diagnostic(gamma1, eta));

    let inputs = ExtrapolationInputs {
        gamma1_hat: gamma1,
        eta_hat: eta,
        xi_hat: evt.xi_hat.as_ref().ok().copied(),
        var_x_int: evt.var_x_int,
        covar_int: intermediate.covar_int.as_ref().ok().copied(),
        coes_int: intermediate.coes_int.as_ref().ok().copied(),
        k: config.k,
        n: sample.n(),
        tau_prime: config.tau_prime,
    };

    // carry the upstream error rather than a generic "missing input"
    let covar_i = match &evt.xi_hat {
        Err(e) => Err(e.clone()),
        Ok(_) => covar_extrap_i(&inputs),
    };
    let covar_ii = match &intermediate.covar_int {
        Err(e) => Err(e.clone()),
        Ok(_) => covar_extrap_ii(&inputs),
    };
    let coes_iii = match &intermediate.coes_int {
        Err(e) => Err(e.clone()),
        Ok(_) => coes_extrap_iii(&inputs),
    };
    let coes_i = covar_i.clone().and_then(|c| coes_extrap_i(&inputs, c));
    let coes_ii = covar_ii.clone().and_then(|c| coes_extrap_ii(&inputs, c));

    Ok(Estimates {
        evt,
        intermediate,
        extrapolations: ExtrapolationSet {
            covar_i,
            covar_ii,
            coes_i,
            coes_ii,
            coes_iii,
            diagnostics,
        },
    })
}
