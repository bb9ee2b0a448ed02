//! Benchmark models, ground truth and the MSRE harness.

pub mod models;
pub mod msre;
pub mod truth;

pub use models::{draw_pairs, sample_model, sample_model_stream, stream_rng, ModelSpec};
pub use msre::{grid_search, run_msre, run_msre_with, GridCell, GridResult, MsreReport, RunConfig};
pub use truth::{true_coes, true_covar, true_var_y, truth, TruthValues};
