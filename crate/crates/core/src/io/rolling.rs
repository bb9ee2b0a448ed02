use rayon::prelude::*;

use crate::covar::{estimate_all, Estimates};
use crate::error::{Error, Result};
use crate::sample::{BivariateSample, TailConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RollingConfig {
    pub window: usize,
    pub step: usize,
    pub tail: TailConfig,
}

impl RollingConfig {
    /// About one trading month of daily observations.
    pub const DEFAULT_STEP: usize = 21;
}

#[derive(Debug, Clone)]
pub struct RollingRow {
    /// One past the last observation of the window, i.e. the window is
    /// `[end - window, end)`.
    pub end: usize,
    pub estimates: Result<Estimates>,
}

pub fn rolling_row_count(len: usize, window: usize, step: usize) -> usize {
    if window > len || step == 0 || window == 0 {
        0
    } else {
        (len - window) / step + 1
    }
}

/// Runs [`estimate_all`] on each trailing window. Windows are evaluated in
/// parallel and returned in order.
pub fn rolling_estimates(x: &[f64], y: &[f64], rc: &RollingConfig) -> Result<Vec<RollingRow>> {
    if x.len() != y.len() {
        return Err(Error::Misaligned(format!(
            "x has {} losses but y has {}",
            x.len(),
            y.len()
        )));
    }
    if rc.step == 0 {
        return Err(Error::InvalidParameter("step must be at least 1".into()));
    }
    if rc.window > x.len() {
        return Err(Error::InvalidParameter(format!(
            "window {} exceeds series length {}",
            rc.window,
            x.len()
        )));
    }
    rc.tail.validate(rc.window)?;
    let rows = rolling_row_count(x.len(), rc.window, rc.step);
    Ok((0..rows)
        .into_par_iter()
        .map(|j| {
            let end = rc.window + j * rc.step;
            let start = end - rc.window;
            let estimates = BivariateSample::new(x[start..end].to_vec(), y[start..end].to_vec())
                .and_then(|s| estimate_all(&s, &rc.tail));
            RollingRow { end, estimates }
        })
        .collect())
}
