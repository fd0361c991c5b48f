//! Recursive multi-step forecasting.
//!
//! A single one-step-ahead regressor is trained on a lag matrix and then
//! iterated: each prediction is appended to the history window and becomes a
//! lag input for the next step. Training rows and prediction-time feature
//! vectors come from the same routine ([`push_features`]), so the two paths
//! cannot drift apart.
//!
//! Prediction intervals resample in-sample residuals along simulated
//! recursive paths. Path `b` draws from its own [`SplitMix64`] stream seeded
//! with `derive_seed(seed, b)`; at every step the drawn residual is added to
//! the one-step prediction *before* it is fed back, so uncertainty compounds
//! with the horizon.

use chrono::{Datelike, Timelike};
use serde::Serialize;

use crate::audit::{self, AuditRecord, Level};
use crate::error::{Error, Result};
use crate::provenance::ProvenanceRecord;
use crate::regress::{fit_regressor, FittedRegressor, Matrix, RegressorSpec};
use crate::rng::{derive_seed, SplitMix64};
use crate::series::{align, check_finite, ExogMatrix, Frequency, TimeSeries, Timestamp};
use crate::stats::{quantile_sorted, sorted};

const LOGGER: &str = "safeforecast.forecast";

/// Strictly increasing, positive lag offsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LagSet(Vec<usize>);

impl LagSet {
    pub fn new(lags: Vec<usize>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::InvalidArgument("lag set must not be empty".into()));
        }
        if lags[0] == 0 {
            return Err(Error::InvalidArgument("lags must be >= 1".into()));
        }
        if lags.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "lags must be strictly increasing, got {lags:?}"
            )));
        }
        Ok(LagSet(lags))
    }

    /// Lags `1..=n`.
    pub fn range(n: usize) -> Result<Self> {
        LagSet::new((1..=n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("non-empty")
    }
}

/// Training design for the one-step model.
#[derive(Debug, Clone, PartialEq)]
pub struct LagMatrix {
    pub x: Matrix,
    pub targets: Vec<f64>,
    /// Series position of the first target (= max lag).
    pub first_target: usize,
}

/// Feature row for target position `t`: `history[t - l]` for each lag in
/// order, followed by the exogenous row if any.
#[inline]
fn push_features(
    out: &mut Vec<f64>,
    history: &[f64],
    t: usize,
    lags: &LagSet,
    exog: Option<(&ExogMatrix, usize)>,
) {
    out.extend(lags.as_slice().iter().map(|&l| history[t - l]));
    if let Some((x, row)) = exog {
        x.extend_row(row, out);
    }
}

pub fn build_lag_matrix(
    y: &TimeSeries,
    lags: &LagSet,
    exog: Option<&ExogMatrix>,
) -> Result<LagMatrix> {
    lag_matrix(y, lags, exog, "build_lag_matrix")
}

fn lag_matrix(
    y: &TimeSeries,
    lags: &LagSet,
    exog: Option<&ExogMatrix>,
    event: &str,
) -> Result<LagMatrix> {
    let max_lag = lags.max();
    if y.len() <= max_lag {
        return Err(Error::TooShort(format!(
            "{} observations cannot support max lag {max_lag}",
            y.len()
        )));
    }
    check_finite(y.values(), LOGGER, event)?;
    let offset = match exog {
        None => None,
        Some(x) => Some(
            align(y, x)
                .map_err(|e| Error::AlignmentError(e.to_string()))?
                .offset,
        ),
    };
    let ncols = lags.len() + exog.map_or(0, ExogMatrix::ncols);
    let nrows = y.len() - max_lag;
    let mut data = Vec::with_capacity(nrows * ncols);
    let history = y.values();
    for t in max_lag..y.len() {
        push_features(&mut data, history, t, lags, exog.zip(offset.map(|o| o + t)));
    }
    Ok(LagMatrix {
        x: Matrix::new(nrows, ncols, data)?,
        targets: history[max_lag..].to_vec(),
        first_target: max_lag,
    })
}

/// A trained recursive forecaster.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedForecaster {
    pub(crate) lags: LagSet,
    pub(crate) regressor: FittedRegressor,
    pub(crate) estimator: String,
    pub(crate) exog_columns: Vec<String>,
    pub(crate) residuals: Vec<f64>,
    pub(crate) training_range: (Timestamp, Timestamp),
    pub(crate) freq: Frequency,
    pub(crate) last_window: Vec<f64>,
    pub(crate) window_end: Timestamp,
    pub(crate) seed: u64,
    pub(crate) provenance: ProvenanceRecord,
}

impl FittedForecaster {
    pub fn lags(&self) -> &LagSet {
        &self.lags
    }

    pub fn regressor(&self) -> &FittedRegressor {
        &self.regressor
    }

    /// Backend label such as `ols`.
    pub fn estimator(&self) -> &str {
        &self.estimator
    }

    pub fn exog_columns(&self) -> &[String] {
        &self.exog_columns
    }

    /// In-sample one-step residuals, `target - prediction`, in time order.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn training_range(&self) -> (Timestamp, Timestamp) {
        self.training_range
    }

    pub fn freq(&self) -> Frequency {
        self.freq
    }

    /// The most recent `max(lags)` observations the next forecast starts from.
    pub fn last_window(&self) -> &[f64] {
        &self.last_window
    }

    /// Timestamp of the last value in [`Self::last_window`].
    pub fn window_end(&self) -> Timestamp {
        self.window_end
    }

    /// First timestamp a call to [`predict_recursive`] forecasts.
    pub fn forecast_start(&self) -> Timestamp {
        self.window_end.add_steps(self.freq, 1)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn provenance(&self) -> &ProvenanceRecord {
        &self.provenance
    }

    /// Same model, with the forecast origin moved to the end of `history`.
    ///
    /// `history` must be on the model's grid and contain at least `max(lags)`
    /// finite values; only its tail is used.
    pub fn with_history(&self, history: &TimeSeries) -> Result<FittedForecaster> {
        let w = self.lags.max();
        if history.freq() != self.freq {
            return Err(Error::FrequencyMismatch {
                left: history.freq().to_string(),
                right: self.freq.to_string(),
            });
        }
        if history.len() < w {
            return Err(Error::TooShort(format!(
                "history of {} values is shorter than max lag {w}",
                history.len()
            )));
        }
        let tail = &history.values()[history.len() - w..];
        check_finite(tail, LOGGER, "predict")?;
        Ok(FittedForecaster {
            last_window: tail.to_vec(),
            window_end: history.end(),
            ..self.clone()
        })
    }

    fn check_exog_future(&self, steps: usize, exog: Option<&ExogMatrix>) -> Result<()> {
        match (self.exog_columns.is_empty(), exog) {
            (true, None) => Ok(()),
            (true, Some(x)) => Err(Error::ExogShape(format!(
                "model was fitted without exogenous features but {} columns were supplied",
                x.ncols()
            ))),
            (false, None) => Err(Error::ExogMissing(self.exog_columns.len())),
            (false, Some(x)) => {
                let names = x.column_names();
                if names != self.exog_columns {
                    return Err(Error::ExogShape(format!(
                        "expected columns {:?}, got {:?}",
                        self.exog_columns, names
                    )));
                }
                if x.len() != steps {
                    return Err(Error::ExogShape(format!(
                        "expected {steps} future rows, got {}",
                        x.len()
                    )));
                }
                if x.freq() != self.freq {
                    return Err(Error::FrequencyMismatch {
                        left: x.freq().to_string(),
                        right: self.freq.to_string(),
                    });
                }
                if x.start() != self.forecast_start() {
                    return Err(Error::AlignmentError(format!(
                        "future exog starts at {}, forecast starts at {}",
                        x.start(),
                        self.forecast_start()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Runs the recursion. `noise(step)` is added to each one-step prediction
    /// before it is fed back.
    fn simulate(
        &self,
        steps: usize,
        exog: Option<&ExogMatrix>,
        mut noise: impl FnMut() -> f64,
    ) -> Vec<f64> {
        let w = self.last_window.len();
        let mut history = Vec::with_capacity(w + steps);
        history.extend_from_slice(&self.last_window);
        let mut row = Vec::with_capacity(self.regressor.feature_count());
        for k in 0..steps {
            row.clear();
            push_features(&mut row, &history, w + k, &self.lags, exog.map(|x| (x, k)));
            let next = self.regressor.predict_unchecked(&row) + noise();
            history.push(next);
        }
        history.split_off(w)
    }
}

pub fn fit_forecaster(
    y: &TimeSeries,
    lags: &LagSet,
    exog: Option<&ExogMatrix>,
    spec: &RegressorSpec,
    provenance: ProvenanceRecord,
) -> Result<FittedForecaster> {
    let design = lag_matrix(y, lags, exog, "fit")?;
    let regressor = fit_regressor(spec, &design.x, &design.targets)?;
    let residuals: Vec<f64> = (0..design.x.rows())
        .map(|i| design.targets[i] - regressor.predict_unchecked(design.x.row(i)))
        .collect();
    let w = lags.max();
    let f = FittedForecaster {
        lags: lags.clone(),
        regressor,
        estimator: spec.label(),
        exog_columns: exog.map(ExogMatrix::column_names).unwrap_or_default(),
        residuals,
        training_range: (y.start(), y.end()),
        freq: y.freq(),
        last_window: y.values()[y.len() - w..].to_vec(),
        window_end: y.end(),
        seed: spec.seed,
        provenance,
    };
    audit::emit_active(
        AuditRecord::new(y.end(), LOGGER, Level::Info, "fit", "forecaster fitted")
            .with_context("estimator", f.estimator.as_str())
            .with_context("rows", design.x.rows())
            .with_context("features", design.x.cols())
            .with_context("training_start", f.training_range.0.to_string())
            .with_context("training_end", f.training_range.1.to_string())
            .with_context("seed", f.seed),
    )?;
    Ok(f)
}

/// Point forecast for `steps` periods after the model's window end.
pub fn predict_recursive(
    f: &FittedForecaster,
    steps: usize,
    exog_future: Option<&ExogMatrix>,
) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    f.check_exog_future(steps, exog_future)?;
    if let Some(x) = exog_future {
        for (_, col) in x.columns() {
            check_finite(col, LOGGER, "predict")?;
        }
    }
    let out = f.simulate(steps, exog_future, || 0.0);
    check_finite(&out, LOGGER, "predict")?;
    Ok(out)
}

/// Point forecast with empirical bootstrap bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalForecast {
    pub point: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub coverage: f64,
}

pub fn predict_interval(
    f: &FittedForecaster,
    steps: usize,
    exog_future: Option<&ExogMatrix>,
    coverage: f64,
    n_boot: usize,
) -> Result<IntervalForecast> {
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "coverage must lie in (0, 1), got {coverage}"
        )));
    }
    if n_boot == 0 {
        return Err(Error::InvalidArgument("n_boot must be >= 1".into()));
    }
    if f.residuals.is_empty() {
        return Err(Error::NoResiduals);
    }
    let point = predict_recursive(f, steps, exog_future)?;
    let n = f.residuals.len();
    let mut by_step: Vec<Vec<f64>> = vec![Vec::with_capacity(n_boot); steps];
    for b in 0..n_boot {
        let mut rng = SplitMix64::new(derive_seed(f.seed, b as u64));
        let path = f.simulate(steps, exog_future, || f.residuals[rng.next_index(n)]);
        for (slot, v) in by_step.iter_mut().zip(path) {
            slot.push(v);
        }
    }
    let alpha = 1.0 - coverage;
    let (lower, upper) = by_step
        .iter()
        .map(|vals| {
            let s = sorted(vals);
            (
                quantile_sorted(&s, alpha / 2.0),
                quantile_sorted(&s, 1.0 - alpha / 2.0),
            )
        })
        .unzip();
    Ok(IntervalForecast {
        point,
        lower,
        upper,
        coverage,
    })
}

/// Components of the synthetic hourly load generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub start: Timestamp,
    pub freq: Frequency,
    pub base: f64,
    /// Linear trend rises from 0 to this value over the series.
    pub trend_end: f64,
    /// Amplitude of `sin(2π hour/24 − π/2)`, i.e. trough at midnight, peak at noon.
    pub daily_amplitude: f64,
    /// Added on Monday–Friday.
    pub weekday_bonus: f64,
    pub noise_sd: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            start: Timestamp::ymd_hms(2025, 1, 1, 0, 0, 0),
            freq: Frequency::hours(1),
            base: 50.0,
            trend_end: 2.0,
            daily_amplitude: 4.0,
            weekday_bonus: 1.5,
            noise_sd: 0.5,
        }
    }
}

/// Synthetic electric load: base + linear trend + daily sine + weekday step +
/// Gaussian noise.
pub fn synth_load(n: usize, seed: u64, params: &SynthParams) -> Result<TimeSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let step = if n > 1 {
        params.trend_end / (n - 1) as f64
    } else {
        0.0
    };
    let values = (0..n)
        .map(|i| {
            let t = params.start.add_steps(params.freq, i as i64).as_datetime();
            let trend = if n > 1 && i == n - 1 {
                params.trend_end
            } else {
                i as f64 * step
            };
            let hour = t.hour() as f64;
            let daily = params.daily_amplitude
                * (2.0 * std::f64::consts::PI * hour / 24.0 - std::f64::consts::PI / 2.0).sin();
            let weekly = if t.weekday().num_days_from_monday() < 5 {
                params.weekday_bonus
            } else {
                0.0
            };
            let noise = params.noise_sd * rng.next_gaussian();
            params.base + trend + daily + weekly + noise
        })
        .collect();
    TimeSeries::new("load", params.start, params.freq, values)
}
