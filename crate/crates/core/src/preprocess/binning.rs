use serde::{Deserialize, Serialize};

use super::LOGGER;
use crate::error::{Error, Result};
use crate::series::check_finite;
use crate::stats::{quantile_sorted_ratio, sorted};

/// Fitted equal-frequency binner: `n_bins - 1` ascending cut points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileBinnerState {
    n_bins: usize,
    edges: Vec<f64>,
}

impl QuantileBinnerState {
    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Bin of a single finite value: the number of edges strictly below it.
    pub fn bin(&self, v: f64) -> usize {
        self.edges.partition_point(|&e| e < v)
    }
}

/// Edges are the `k / n_bins` linear-interpolation quantiles, `k = 1..n_bins`.
pub fn quantile_bin_fit(values: &[f64], n_bins: usize) -> Result<QuantileBinnerState> {
    if values.is_empty() {
        return Err(Error::TooShort("cannot fit a binner on no values".into()));
    }
    if n_bins == 0 {
        return Err(Error::InvalidArgument("n_bins must be >= 1".into()));
    }
    check_finite(values, LOGGER, "quantile_bin_fit")?;
    let s = sorted(values);
    let edges = (1..n_bins)
        .map(|k| quantile_sorted_ratio(&s, k, n_bins))
        .collect();
    Ok(QuantileBinnerState { n_bins, edges })
}

pub fn quantile_bin_transform(state: &QuantileBinnerState, values: &[f64]) -> Result<Vec<usize>> {
    check_finite(values, LOGGER, "quantile_bin_transform")?;
    Ok(values.iter().map(|&v| state.bin(v)).collect())
}
