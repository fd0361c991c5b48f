//! Deterministic transformers: gap interpolation, cyclical calendar
//! encoding, equal-frequency binning and finite differencing.

mod binning;
mod calendar;
mod diff;
mod interpolate;

pub use binning::{quantile_bin_fit, quantile_bin_transform, QuantileBinnerState};
pub use calendar::{build_exog, rbf_encode, CalendarField, ExogBuilder, Period};
pub use diff::{difference, undifference, DiffState};
pub use interpolate::{interpolate_linear, MissingMode};

const LOGGER: &str = "safeforecast.preprocess";
