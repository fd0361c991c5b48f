//! Deterministic, fail-safe recursive forecasting for regularly sampled
//! univariate time series.
//!
//! The pipeline is: validate and repair the target ([`series`],
//! [`preprocess`]), build calendar covariates ([`preprocess::build_exog`]),
//! fit a one-step linear model on lag features and iterate it
//! ([`forecast`]), evaluate with growing-window backtests ([`select`]), and
//! persist the model with its data provenance ([`provenance`]). Every step
//! can report to a JSON-lines audit log ([`audit`]).
//!
//! Invalid input is never repaired silently: non-finite values, gaps and
//! misaligned covariates fail with a typed [`Error`], and the failure is
//! recorded in the active audit log.

pub mod audit;
pub mod cli;
pub mod clock;
pub mod cpe;
pub mod error;
pub mod forecast;
pub mod preprocess;
pub mod provenance;
pub mod regress;
pub mod rng;
pub mod select;
pub mod series;
pub mod stats;

pub use clock::{Clock, FixedClock, SystemClock};
pub use cpe::{cpe_for, CpeIdentifier};
pub use error::{Error, Result};
pub use forecast::{
    build_lag_matrix, fit_forecaster, predict_interval, predict_recursive, synth_load,
    FittedForecaster, IntervalForecast, LagSet, SynthParams,
};
pub use provenance::{load_model, save_model, ProvenanceRecord};
pub use regress::{fit_regressor, predict_regressor, FittedRegressor, Matrix, RegressorSpec};
pub use select::{backtest, metric, one_step_folds, time_series_folds, Fold, FoldPlan, MetricName};
pub use series::{ExogMatrix, Frequency, IndexRange, TimeSeries, Timestamp};
