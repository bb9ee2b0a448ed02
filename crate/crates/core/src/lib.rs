//! Extreme-level CoVaR and CoES estimation for bivariate losses whose tails
//! are asymptotically independent but positively associated.
//!
//! Two extrapolation families are provided. The first carries the
//! intermediate VaR of `X` to the extreme level through an estimated
//! adjustment factor (CoVaR-I, CoES-I). The second extrapolates intermediate
//! CoVaR/CoES estimates directly (CoVaR-II, CoES-II, CoES-III). Both scale by
//! `(k / (n(1 − τ′)))^{γ̂₁(3 − 1/η̂)}`.
//!
//! ```no_run
//! use tailcovar::{estimate_all, simulation::{sample_model, ModelSpec}, TailConfig};
//!
//! let sample = sample_model(&ModelSpec::model1(), 1000, 7).unwrap();
//! let est = estimate_all(&sample, &TailConfig::new(287, 274, 274, 0.99)).unwrap();
//! println!("CoVaR-I = {:?}", est.extrapolations.covar_i);
//! ```

pub mod covar;
pub mod diagnostics;
pub mod error;
pub mod evt;
pub mod io;
pub mod numeric;
pub mod sample;
pub mod simulation;

pub use covar::{
    coes_extrap_i, coes_extrap_ii, coes_extrap_iii, covar_extrap_i, covar_extrap_ii, estimate_all,
    intermediate_coes, intermediate_covar, Estimates, ExtrapolationInputs, ExtrapolationSet,
    IntermediateEstimates, ESTIMATOR_NAMES,
};
pub use diagnostics::Diagnostic;
pub use error::{Error, Result};
pub use evt::{eta_hat, hill, min_rank_transform, tail_copula_hat, xi_hat, EvtEstimates};
pub use sample::{compute_ranks, empirical_var, order_statistic, BivariateSample, RankVectors, TailConfig};
